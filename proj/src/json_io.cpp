#include "ttlab/json_io.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "ttlab/recode.hpp"
#include "ttlab/reduction.hpp"
#include "ttlab/segments.hpp"

namespace ttlab {

namespace {

std::vector<std::uint8_t> parse_bit_string(const std::string& text) {
    std::vector<std::uint8_t> out;
    out.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("stream json: bit strings may only contain 0 and 1");
        out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

} // namespace

BitStream stream_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("stream json: expected an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();

    if (kind == "constant") return BitStream::constant(j.at("bit").get<Bit>());
    if (kind == "periodic")
        return BitStream::periodic(parse_bit_string(j.at("pattern").get<std::string>()));
    if (kind == "prng") return BitStream::prng(j.at("seed").get<std::uint64_t>());
    if (kind == "file") return BitStream::from_file(j.at("path").get<std::string>());
    if (kind == "explicit")
        return BitStream::explicit_bits(parse_bit_string(j.at("prefix").get<std::string>()),
                                        j.at("tail").get<Bit>());
    if (kind == "join") return join(stream_from_json(j.at("a")), stream_from_json(j.at("b")));
    if (kind == "complement") return complement(stream_from_json(j.at("of")));
    if (kind == "half") return half(stream_from_json(j.at("of")), j.at("parity").get<int>());
    if (kind == "column")
        return column(stream_from_json(j.at("of")), j.at("index").get<std::uint64_t>());
    if (kind == "overlay") {
        std::vector<std::pair<std::uint64_t, Bit>> sets;
        for (const auto& pt : j.at("set"))
            sets.emplace_back(pt.at(0).get<std::uint64_t>(), pt.at(1).get<Bit>());
        return overlay(stream_from_json(j.at("base")), std::move(sets));
    }
    if (kind == "join_over")
        return join_over(stream_from_json(j.at("a")), stream_from_json(j.at("b")),
                         stream_from_json(j.at("x")));
    if (kind == "infinite_join") {
        StreamFamily fam;
        for (const auto& c : j.at("columns")) fam.columns.push_back(stream_from_json(c));
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "cycle") {
            fam.mode = StreamFamily::Mode::Cycle;
        } else if (mode == "pad") {
            fam.mode = StreamFamily::Mode::Pad;
            fam.pad = stream_from_json(j.at("pad"));
        } else {
            throw std::invalid_argument("stream json: unknown family mode '" + mode + "'");
        }
        return infinite_join(std::move(fam));
    }
    if (kind == "segment")
        return segment_stream(stream_from_json(j.at("filler")),
                              stream_from_json(j.at("indicator")));
    if (kind == "double_segment") {
        const std::string mode = j.at("mode").get<std::string>();
        if (mode != "zero_fill" && mode != "filler_fill")
            throw std::invalid_argument("stream json: unknown double-segment mode '" + mode + "'");
        return double_segment_stream(stream_from_json(j.at("filler")),
                                     stream_from_json(j.at("x0")),
                                     mode == "zero_fill" ? DoubleSegmentMode::ZeroFill
                                                         : DoubleSegmentMode::FillerFill);
    }
    if (kind == "wtt")
        return wtt_stream(stream_from_json(j.at("filler")), stream_from_json(j.at("s0")),
                          UseBound::from_json(j.at("use")),
                          j.at("max_position").get<std::uint64_t>());
    if (kind == "some_to_many") return some_to_many(stream_from_json(j.at("stream")));
    if (kind == "some_to_many_one") return some_to_many_one(stream_from_json(j.at("stream")));
    if (kind == "reduced")
        return apply(TTReduction::from_json(j.at("reduction")),
                     stream_from_json(j.at("oracle")));

    throw std::invalid_argument("stream json: unknown kind '" + kind + "'");
}

IndexSet index_set_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("index set json: expected an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();

    if (kind == "tail") return IndexSet::tail(j.at("from").get<std::uint64_t>());
    if (kind == "arithmetic")
        return IndexSet::arithmetic(j.at("a").get<std::uint64_t>(),
                                    j.at("b").get<std::uint64_t>());
    if (kind == "finite")
        return IndexSet::explicit_finite(j.at("members").get<std::vector<std::uint64_t>>());
    if (kind == "stream")
        return IndexSet::stream_backed(stream_from_json(j.at("indicator")),
                                       j.at("infinite").get<bool>());

    throw std::invalid_argument("index set json: unknown kind '" + kind + "'");
}

} // namespace ttlab
