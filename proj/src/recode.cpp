#include "ttlab/recode.hpp"

namespace ttlab {

namespace {

class SomeToManyNode final : public StreamNode {
public:
    explicit SomeToManyNode(BitStream b) : b_(std::move(b)) {}
    Bit bit(std::uint64_t p) const override { return b_.bit(some_to_many_source(p)); }
    nlohmann::json describe() const override {
        return {{"kind", "some_to_many"}, {"stream", b_.describe()}};
    }

private:
    BitStream b_;
};

class SomeToManyOneNode final : public StreamNode {
public:
    explicit SomeToManyOneNode(BitStream b) : b_(std::move(b)) {}
    Bit bit(std::uint64_t p) const override { return b_.bit(some_to_many_one_source(p)); }
    nlohmann::json describe() const override {
        return {{"kind", "some_to_many_one"}, {"stream", b_.describe()}};
    }

private:
    BitStream b_;
};

} // namespace

BitStream some_to_many(BitStream b) {
    return BitStream(std::make_shared<SomeToManyNode>(std::move(b)));
}

BitStream some_to_many_one(BitStream b) {
    return BitStream(std::make_shared<SomeToManyOneNode>(std::move(b)));
}

} // namespace ttlab
