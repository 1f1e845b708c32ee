#include "ttlab/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cstring>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

namespace ttlab {

namespace {

std::uint64_t floor_log2(std::uint64_t v) { return std::bit_width(v) - 1; } // v >= 1
std::uint64_t ceil_log2(std::uint64_t v) { return v <= 1 ? 0 : std::bit_width(v - 1); }
std::uint64_t gamma_len(std::uint64_t v) { return 2 * floor_log2(v) + 1; } // v >= 1

} // namespace

std::vector<std::uint64_t> ComplexityEstimator::prefix_profile(const BitStream& s,
                                                               std::uint64_t upto,
                                                               std::uint64_t stage) const {
    auto pe = prefix_estimates(s, upto);
    std::vector<std::uint64_t> out;
    out.reserve(upto);
    for (std::uint64_t n = 1; n <= upto; ++n) out.push_back(pe->at(n, stage));
    return out;
}

namespace {

// Default prefix estimates: materialize the prefix once, re-estimate slices.
class SlicingPrefixEstimates final : public PrefixEstimates {
public:
    SlicingPrefixEstimates(const ComplexityEstimator& e, const BitStream& s, std::uint64_t upto)
        : estimator_(e), bits_(s.prefix(upto)) {}
    std::uint64_t at(std::uint64_t n, std::uint64_t stage) const override {
        if (n > bits_.size()) throw std::out_of_range("prefix estimates: horizon exceeded");
        std::vector<std::uint8_t> slice(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n));
        return estimator_.estimate(slice, stage);
    }

private:
    const ComplexityEstimator& estimator_;
    std::vector<std::uint8_t> bits_;
};

} // namespace

std::unique_ptr<PrefixEstimates> ComplexityEstimator::prefix_estimates(const BitStream& s,
                                                                       std::uint64_t upto) const {
    return std::make_unique<SlicingPrefixEstimates>(*this, s, upto);
}

// --- length-only stubs ------------------------------------------------------

namespace {

class LengthOnlyEstimator : public ComplexityEstimator {
public:
    virtual std::uint64_t cost(std::uint64_t n) const = 0;

    std::uint64_t estimate(const std::vector<std::uint8_t>& sigma, std::uint64_t) const override {
        return cost(sigma.size());
    }

    std::unique_ptr<PrefixEstimates> prefix_estimates(const BitStream&,
                                                      std::uint64_t) const override {
        class P final : public PrefixEstimates {
        public:
            explicit P(const LengthOnlyEstimator& e) : e_(e) {}
            std::uint64_t at(std::uint64_t n, std::uint64_t) const override { return e_.cost(n); }

        private:
            const LengthOnlyEstimator& e_;
        };
        return std::make_unique<P>(*this);
    }
};

class IdealEstimator final : public LengthOnlyEstimator {
public:
    std::string name() const override { return "ideal"; }
    std::uint64_t cost(std::uint64_t n) const override { return n; }
};

class LogEstimator final : public LengthOnlyEstimator {
public:
    std::string name() const override { return "log"; }
    std::uint64_t cost(std::uint64_t n) const override {
        if (n <= 1) return 0; // 2*log2(1) = 0
        return 2 * floor_log2(n) + (std::has_single_bit(n) ? 0 : 2);
    }
};

class HalfEstimator final : public LengthOnlyEstimator {
public:
    std::string name() const override { return "half"; }
    std::uint64_t cost(std::uint64_t n) const override { return (n + 1) / 2; }
};

class ZeroEstimator final : public LengthOnlyEstimator {
public:
    std::string name() const override { return "zero"; }
    std::uint64_t cost(std::uint64_t) const override { return 0; }
};

} // namespace

std::unique_ptr<ComplexityEstimator> make_ideal_estimator() { return std::make_unique<IdealEstimator>(); }
std::unique_ptr<ComplexityEstimator> make_log_estimator() { return std::make_unique<LogEstimator>(); }
std::unique_ptr<ComplexityEstimator> make_half_estimator() { return std::make_unique<HalfEstimator>(); }
std::unique_ptr<ComplexityEstimator> make_zero_estimator() { return std::make_unique<ZeroEstimator>(); }

// --- shipped compressor -----------------------------------------------------

namespace {

const std::vector<std::uint64_t>& lz_level_caps() {
    static const std::vector<std::uint64_t> caps = {16, 64, 256, 1024, 4096, 16384, 65536};
    return caps;
}

// One LZ78 parse with the dictionary frozen once it reaches `cap` phrases.
// Phrases are coded as (parent index, next bit); the index fits the number
// of known phrases. An unfinished phrase at the end codes its trie node.
class LzParse {
public:
    explicit LzParse(std::uint64_t cap) : cap_(cap) {
        nodes_.push_back({UINT32_MAX, UINT32_MAX}); // root
    }

    void push(std::uint8_t b) {
        std::uint32_t next = b ? nodes_[node_].one : nodes_[node_].zero;
        if (next != UINT32_MAX) {
            node_ = next;
            return;
        }
        // Phrase ends here: parent index + 1 literal bit.
        closed_cost_ += ceil_log2(entries_ + 1) + 1;
        if (entries_ < cap_) {
            nodes_.push_back({UINT32_MAX, UINT32_MAX});
            std::uint32_t id = static_cast<std::uint32_t>(nodes_.size() - 1);
            (b ? nodes_[node_].one : nodes_[node_].zero) = id;
            ++entries_;
        }
        node_ = 0;
    }

    std::uint64_t cost() const {
        return closed_cost_ + (node_ == 0 ? 0 : ceil_log2(entries_ + 1));
    }

private:
    struct Node {
        std::uint32_t zero, one;
    };
    std::uint64_t cap_;
    std::uint64_t entries_ = 0;
    std::uint64_t closed_cost_ = 0;
    std::uint32_t node_ = 0;
    std::vector<Node> nodes_;
};

// Streaming cost tracker for all components of the shipped compressor.
class LzScanner {
public:
    LzScanner() {
        for (auto cap : lz_level_caps()) parses_.emplace_back(cap);
    }

    void push(std::uint8_t b) {
        ++length_;
        for (auto& p : parses_) p.push(b);
        if (run_len_ > 0 && b == run_bit_) {
            ++run_len_;
        } else {
            if (run_len_ > 0) rle_closed_ += gamma_len(run_len_);
            run_bit_ = b;
            run_len_ = 1;
        }
    }

    std::uint64_t length() const { return length_; }

    std::uint64_t literal_cost() const { return length_ + gamma_len(length_ + 1); }

    std::uint64_t rle_cost() const {
        return 1 + rle_closed_ + (run_len_ > 0 ? gamma_len(run_len_) : 0);
    }

    std::uint64_t lz_cost(std::size_t level) const { return parses_[level].cost(); }

    // min over the components admitted at this stage, plus the 2-bit mode
    // selector. Levels with cap <= max(16, stage) are admitted, so the
    // value is non-increasing in stage and stable for stage >= length.
    std::uint64_t estimate(std::uint64_t stage) const {
        std::uint64_t best = std::min(literal_cost(), rle_cost());
        const auto& caps = lz_level_caps();
        std::uint64_t allowed = std::max<std::uint64_t>(caps[0], stage);
        for (std::size_t j = 0; j < caps.size() && caps[j] <= allowed; ++j)
            best = std::min(best, lz_cost(j));
        return best + 2;
    }

private:
    std::uint64_t length_ = 0;
    std::vector<LzParse> parses_;
    std::uint8_t run_bit_ = 0;
    std::uint64_t run_len_ = 0;
    std::uint64_t rle_closed_ = 0;
};

class LzPrefixEstimates final : public PrefixEstimates {
public:
    LzPrefixEstimates(const BitStream& s, std::uint64_t upto) {
        const auto& caps = lz_level_caps();
        per_level_.resize(caps.size());
        LzScanner scanner;
        literal_.reserve(upto);
        rle_.reserve(upto);
        for (auto& v : per_level_) v.reserve(upto);
        for (std::uint64_t n = 0; n < upto; ++n) {
            scanner.push(static_cast<std::uint8_t>(s.bit(n)));
            literal_.push_back(scanner.literal_cost());
            rle_.push_back(scanner.rle_cost());
            for (std::size_t j = 0; j < caps.size(); ++j)
                per_level_[j].push_back(scanner.lz_cost(j));
        }
    }

    std::uint64_t at(std::uint64_t n, std::uint64_t stage) const override {
        if (n == 0) return 2 + 1;
        if (n > literal_.size()) throw std::out_of_range("prefix estimates: horizon exceeded");
        const auto& caps = lz_level_caps();
        std::uint64_t best = std::min(literal_[n - 1], rle_[n - 1]);
        std::uint64_t allowed = std::max<std::uint64_t>(caps[0], stage);
        for (std::size_t j = 0; j < caps.size() && caps[j] <= allowed; ++j)
            best = std::min(best, per_level_[j][n - 1]);
        return best + 2;
    }

    std::vector<std::uint64_t> stage_breakpoints() const override {
        const auto& caps = lz_level_caps();
        return std::vector<std::uint64_t>(caps.begin() + 1, caps.end());
    }

private:
    std::vector<std::uint64_t> literal_, rle_;
    std::vector<std::vector<std::uint64_t>> per_level_;
};

class LzEstimator final : public ComplexityEstimator {
public:
    std::string name() const override { return "lz"; }

    std::uint64_t estimate(const std::vector<std::uint8_t>& sigma, std::uint64_t stage) const override {
        if (sigma.empty()) return 2 + 1;
        LzScanner scanner;
        for (auto b : sigma) scanner.push(b);
        return scanner.estimate(stage);
    }

    std::unique_ptr<PrefixEstimates> prefix_estimates(const BitStream& s,
                                                      std::uint64_t upto) const override {
        return std::make_unique<LzPrefixEstimates>(s, upto);
    }
};

} // namespace

std::unique_ptr<ComplexityEstimator> make_lz_estimator() { return std::make_unique<LzEstimator>(); }

// --- subprocess estimator -----------------------------------------------------

namespace {

class SubprocessEstimator final : public ComplexityEstimator {
public:
    explicit SubprocessEstimator(std::vector<std::string> argv) : argv_(std::move(argv)) {
        if (argv_.empty()) throw std::invalid_argument("subprocess estimator: empty command");
    }

    std::string name() const override { return "cmd"; }

    nlohmann::json describe() const override { return {{"kind", "cmd"}, {"argv", argv_}}; }

    std::uint64_t estimate(const std::vector<std::uint8_t>& sigma, std::uint64_t) const override {
        std::string request = std::to_string(sigma.size());
        request += '\n';
        auto packed = pack_bits(sigma);
        request.append(packed.begin(), packed.end());
        std::string reply = run_child(request);
        std::size_t pos = 0;
        while (pos < reply.size() && std::isspace(static_cast<unsigned char>(reply[pos]))) ++pos;
        std::uint64_t value = 0;
        bool any = false;
        while (pos < reply.size() && reply[pos] >= '0' && reply[pos] <= '9') {
            value = value * 10 + static_cast<std::uint64_t>(reply[pos] - '0');
            any = true;
            ++pos;
        }
        if (!any) throw std::runtime_error("subprocess estimator: no decimal reply");
        return value;
    }

private:
    std::string run_child(const std::string& input) const {
        int in_pipe[2], out_pipe[2];
        if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
            throw std::runtime_error("subprocess estimator: pipe failed");
        pid_t pid = fork();
        if (pid < 0) throw std::runtime_error("subprocess estimator: fork failed");
        if (pid == 0) {
            dup2(in_pipe[0], 0);
            dup2(out_pipe[1], 1);
            close(in_pipe[0]);
            close(in_pipe[1]);
            close(out_pipe[0]);
            close(out_pipe[1]);
            std::vector<char*> argv;
            argv.reserve(argv_.size() + 1);
            for (const auto& a : argv_) argv.push_back(const_cast<char*>(a.c_str()));
            argv.push_back(nullptr);
            execvp(argv[0], argv.data());
            _exit(127);
        }
        close(in_pipe[0]);
        close(out_pipe[1]);
        std::size_t written = 0;
        while (written < input.size()) {
            ssize_t w = write(in_pipe[1], input.data() + written, input.size() - written);
            if (w < 0) {
                if (errno == EINTR) continue;
                break;
            }
            written += static_cast<std::size_t>(w);
        }
        close(in_pipe[1]);
        std::string reply;
        char buf[4096];
        for (;;) {
            ssize_t r = read(out_pipe[0], buf, sizeof buf);
            if (r < 0 && errno == EINTR) continue;
            if (r <= 0) break;
            reply.append(buf, static_cast<std::size_t>(r));
        }
        close(out_pipe[0]);
        int status = 0;
        waitpid(pid, &status, 0);
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
            throw std::runtime_error("subprocess estimator: child failed");
        return reply;
    }

    std::vector<std::string> argv_;
};

} // namespace

std::unique_ptr<ComplexityEstimator> make_subprocess_estimator(std::vector<std::string> argv) {
    return std::make_unique<SubprocessEstimator>(std::move(argv));
}

std::unique_ptr<ComplexityEstimator> make_estimator(const std::string& spec) {
    if (spec == "lz") return make_lz_estimator();
    if (spec == "ideal") return make_ideal_estimator();
    if (spec == "log") return make_log_estimator();
    if (spec == "half") return make_half_estimator();
    if (spec == "zero") return make_zero_estimator();
    if (spec.rfind("cmd:", 0) == 0) {
        std::istringstream in(spec.substr(4));
        std::vector<std::string> argv;
        std::string word;
        while (in >> word) argv.push_back(word);
        return make_subprocess_estimator(std::move(argv));
    }
    throw std::invalid_argument("estimator: unknown spec '" + spec + "'");
}

std::unique_ptr<ComplexityEstimator> estimator_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "cmd") return make_subprocess_estimator(j.at("argv").get<std::vector<std::string>>());
    return make_estimator(kind);
}

std::uint64_t deficiency(const ComplexityEstimator& e, const BitStream& s, std::uint64_t upto,
                         std::uint64_t stage) {
    auto pe = e.prefix_estimates(s, upto);
    std::uint64_t best = 0;
    for (std::uint64_t n = 1; n <= upto; ++n) {
        std::uint64_t est = pe->at(n, stage);
        if (n > est) best = std::max(best, n - est);
    }
    return best;
}

} // namespace ttlab
