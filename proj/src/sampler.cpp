#include "walkerlab/sampler.hpp"

#include <cmath>

#include "walkerlab/errors.hpp"

namespace walkerlab {

UniformStream::UniformStream(std::uint64_t seed) : eng_(seed) {}

double UniformStream::next(double lo, double hi) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

int UniformStream::next_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(eng_() % span);
}

Sampler::Sampler(SamplerConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.count <= 0) throw ScenarioError("sampler count must be positive");
    for (const auto& b : cfg_.box)
        if (!(b[0] < b[1])) throw ScenarioError("sampler box has an empty interval");
    UniformStream rng(cfg_.seed);
    const long max_attempts = 1000L * cfg_.count;
    long attempts = 0;
    while (static_cast<int>(points_.size()) < cfg_.count) {
        if (++attempts > max_attempts)
            throw ScenarioError("sampler exclusions reject too many points (" +
                                std::to_string(points_.size()) + " of " +
                                std::to_string(cfg_.count) + " accepted)");
        Point4 p;
        for (int i = 0; i < 4; ++i) p[i] = rng.next(cfg_.box[i][0], cfg_.box[i][1]);
        bool keep = true;
        for (const auto& ex : cfg_.exclusions) {
            try {
                if (!(std::fabs(ex.expr.eval(p)) >= ex.min_abs)) keep = false;
            } catch (const DomainError&) {
                keep = false;
            }
            if (!keep) break;
        }
        if (keep) {
            points_.push_back(p);
        } else {
            ++rejected_;
        }
    }
}

Sampler Sampler::with_count(int count) const {
    SamplerConfig c = cfg_;
    c.count = count;
    return Sampler(std::move(c));
}

ZeroVerdict zero_test(const Expression& e, const Sampler& sampler, double atol) {
    ZeroVerdict v;
    for (const auto& p : sampler.points()) {
        double val;
        try {
            val = e.eval(p);
        } catch (const DomainError&) {
            ++v.skipped;
            continue;
        }
        ++v.evaluated;
        const double a = std::fabs(val);
        if (a > v.max_abs || std::isnan(a)) v.max_abs = a;
        if (!(a <= atol) && v.zero) {
            v.zero = false;
            v.witness = p;
            v.witness_value = val;
        }
    }
    if (v.evaluated == 0) throw DomainError("zero_test: every sample lies outside the expression's domain");
    return v;
}

} // namespace walkerlab
