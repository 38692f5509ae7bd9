#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "walkerlab/expr.hpp"
#include "walkerlab/types.hpp"

namespace walkerlab {

/// A sample p is kept only if |expr(p)| >= min_abs (and expr is defined at p).
struct Exclusion {
    Expression expr;
    double min_abs = 0.0;
    std::string text; // source text, kept for reports
};

struct SamplerConfig {
    std::uint64_t seed = 42;
    int count = 64;
    std::array<std::array<double, 2>, 4> box{{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
    std::vector<Exclusion> exclusions;
};

/// Deterministic uniform sampler over a box with rejection predicates.
///
/// The bit stream is std::mt19937_64 with doubles taken from the top 53 bits,
/// so the points do not depend on the standard library's distributions.
class Sampler {
public:
    explicit Sampler(SamplerConfig cfg = {});

    const SamplerConfig& config() const { return cfg_; }
    const std::vector<Point4>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    int rejected() const { return rejected_; }

    /// Same seed stream, different count.
    Sampler with_count(int count) const;

private:
    SamplerConfig cfg_;
    std::vector<Point4> points_;
    int rejected_ = 0;
};

/// Uniform doubles in [lo, hi) from a seeded stream; shared by tests and probes.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed);
    double next(double lo = 0.0, double hi = 1.0);
    int next_int(int lo, int hi); // inclusive

private:
    std::mt19937_64 eng_;
};

struct ZeroVerdict {
    bool zero = true;
    std::optional<Point4> witness;
    double witness_value = 0.0;
    double max_abs = 0.0;
    int evaluated = 0;
    int skipped = 0;
};

ZeroVerdict zero_test(const Expression& e, const Sampler& sampler, double atol = 1e-9);

} // namespace walkerlab
