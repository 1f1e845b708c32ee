#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttlab/bitstream.hpp"

namespace ttlab {

// Stage-addressable code-length estimates for every prefix of one fixed
// stream. at(n, stage) estimates the first n bits at the given effort
// stage; stage_breakpoints lists the stages at which any at(n, .) value may
// still drop, so callers can cache between breakpoints.
class PrefixEstimates {
public:
    virtual ~PrefixEstimates() = default;
    virtual std::uint64_t at(std::uint64_t n, std::uint64_t stage) const = 0;
    virtual std::vector<std::uint64_t> stage_breakpoints() const { return {}; }
};

// Estimates K(sigma) in bits from above: estimate(sigma, stage) is
// non-increasing in stage for fixed sigma and estimate of the empty string
// is a small constant.
class ComplexityEstimator {
public:
    virtual ~ComplexityEstimator() = default;
    virtual std::string name() const = 0;
    virtual nlohmann::json describe() const { return {{"kind", name()}}; }
    virtual std::uint64_t estimate(const std::vector<std::uint8_t>& sigma,
                                   std::uint64_t stage) const = 0;

    // Estimates of prefixes 1..upto at a fixed stage.
    virtual std::vector<std::uint64_t> prefix_profile(const BitStream& s, std::uint64_t upto,
                                                      std::uint64_t stage) const;

    // Prefix estimates addressable by (n, stage); the default evaluates
    // estimate() on materialized prefixes per call.
    virtual std::unique_ptr<PrefixEstimates> prefix_estimates(const BitStream& s,
                                                              std::uint64_t upto) const;
};

// Stubs used by tests and as CLI-selectable baselines. The cost depends on
// the length alone.
std::unique_ptr<ComplexityEstimator> make_ideal_estimator();  // |sigma|
std::unique_ptr<ComplexityEstimator> make_log_estimator();    // ceil(2*log2|sigma|)
std::unique_ptr<ComplexityEstimator> make_half_estimator();   // ceil(|sigma|/2)
std::unique_ptr<ComplexityEstimator> make_zero_estimator();   // 0

// The shipped compressor: 2 mode-selector bits plus the cheapest of
//   literal   raw bits prefixed by an Elias-gamma length,
//   rle       first bit plus gamma-coded run lengths,
//   lz(C)     LZ78 phrase parse with the dictionary frozen at C entries,
//             C ranging over capped effort levels.
// The stage gates which dictionary caps may be used (caps up to
// max(16, stage)), so estimates are non-increasing in stage and stop
// changing once stage reaches the string length.
std::unique_ptr<ComplexityEstimator> make_lz_estimator();

// External estimator: one subprocess invocation per estimate. Protocol on
// stdin: decimal bit count, newline, packed bits MSB-first; stdout: decimal
// estimated bit count. The stage is not transmitted; external estimates are
// treated as stage-constant.
std::unique_ptr<ComplexityEstimator> make_subprocess_estimator(std::vector<std::string> argv);

// Estimator lookup by name: "lz", "ideal", "log", "half", "zero", or
// "cmd:<shell words>" for a subprocess estimator.
std::unique_ptr<ComplexityEstimator> make_estimator(const std::string& spec);
std::unique_ptr<ComplexityEstimator> estimator_from_json(const nlohmann::json& j);

// max over 1 <= n <= upto of (n - estimate(prefix(n), stage)), floored at 0.
std::uint64_t deficiency(const ComplexityEstimator& e, const BitStream& s, std::uint64_t upto,
                         std::uint64_t stage);

} // namespace ttlab
