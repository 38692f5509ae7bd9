#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "walkerlab/errors.hpp"
#include "walkerlab/walker_metric.hpp"

namespace walkerlab {

struct GeodesicState {
    Point4 x{};
    Point4 v{};
    double t = 0.0;
};

struct GeodesicOptions {
    double tol = 1e-9;
    double blowup = 1e12;   // |state| threshold
    double min_step = 1e-14;
    long max_steps = 2'000'000;
    bool record = true;     // keep every accepted state
};

enum class GeodesicStatus { Reached, Blowup, StepUnderflow };

std::string to_string(GeodesicStatus s);

struct GeodesicResult {
    GeodesicStatus status = GeodesicStatus::Reached;
    std::vector<GeodesicState> trajectory;
    std::vector<double> energy;
    GeodesicState last;
    double energy0 = 0.0;
    double max_energy_drift = 0.0; // max |E(t) - E(0)|
    long accepted = 0;
    long rejected = 0;
};

class StepUnderflowError : public Error {
public:
    StepUnderflowError(GeodesicState last, const std::string& what) : Error(what), last_(last) {}
    const GeodesicState& last() const { return last_; }

private:
    GeodesicState last_;
};

/// g(v, v) at x.
double geodesic_energy(const WalkerMetric& g, const GeodesicState& s);

/// Dormand-Prince 5(4) on x'' + Gamma(x', x') = 0. t_end may be below init.t.
/// Throws StepUnderflowError when the step falls below min_step.
GeodesicResult integrate_geodesic(const WalkerMetric& g, const GeodesicState& init, double t_end,
                                  const GeodesicOptions& opts = {});

/// Columns t, x1, x2, xp1, xp2, v1..v4, E.
void write_trajectory_csv(std::ostream& os, const GeodesicResult& r);

struct ProbeConfig {
    std::uint64_t seed = 42;
    int count = 16;
    double t_max = 50.0;
    double half_width = 1.0; // initial data uniform in [-w, w]^8
    GeodesicOptions options{1e-9, 1e12, 1e-14, 2'000'000, false};
};

struct ProbeSeed {
    GeodesicState init;
    GeodesicStatus forward = GeodesicStatus::Reached;
    GeodesicStatus backward = GeodesicStatus::Reached;
    double t_forward = 0.0;  // time reached
    double t_backward = 0.0;
    double max_energy_drift = 0.0;
    std::string note;
    bool reached() const {
        return forward == GeodesicStatus::Reached && backward == GeodesicStatus::Reached;
    }
};

struct ProbeReport {
    std::vector<ProbeSeed> seeds;
    double t_max = 0.0;
    int reached = 0;
    bool all_reached() const { return reached == static_cast<int>(seeds.size()); }
};

/// Integrates each seed to +t_max and -t_max. Failures are recorded, never thrown.
ProbeReport completeness_probe(const WalkerMetric& g, const ProbeConfig& cfg = {});

} // namespace walkerlab
