#pragma once

#include <cstdint>

#include "ttlab/bitstream.hpp"
#include "ttlab/pairing.hpp"

namespace ttlab {

// Membership in Either([C]) = {join(A, B) : A in C or B in C} is a
// documentation-level notion; executably this is just the join.
inline BitStream either_encode(BitStream a, BitStream b) {
    return join(std::move(a), std::move(b));
}

// Position maps behind the two recodings, exposed for verification. Both
// treat every position p as <c, n> with c = <i, j> under the Cantor pairing.

// a(<<i,j>,n>) = b(<i,n>): column <i,j> of the output is column i of the input.
inline std::uint64_t some_to_many_source(std::uint64_t p) {
    auto [c, n] = pairing::decode(p);
    auto [i, j] = pairing::decode(c);
    (void)j;
    return pairing::encode(i, n);
}

// a(<<i,j>,n>) = b(<i,<j,n>>): column <i,j> of the output is the j-th
// sub-column of column i of the input. Injective in p.
inline std::uint64_t some_to_many_one_source(std::uint64_t p) {
    auto [c, n] = pairing::decode(p);
    auto [i, j] = pairing::decode(c);
    return pairing::encode(i, pairing::encode(j, n));
}

BitStream some_to_many(BitStream b);
BitStream some_to_many_one(BitStream b);

} // namespace ttlab
