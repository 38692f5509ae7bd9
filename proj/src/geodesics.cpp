#include "walkerlab/geodesics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "walkerlab/curvature.hpp"
#include "walkerlab/sampler.hpp"

namespace walkerlab {

namespace {

using State = std::array<double, 8>;

// Dormand-Prince 5(4) tableau; the system is autonomous so the nodes c_i are not needed
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

State rhs(const WalkerMetric& g, const State& y) {
    const Point4 x{y[0], y[1], y[2], y[3]};
    Curvature c(metric_jet(g, x, 1));
    const JetTensor& G = c.christoffel();
    State f{};
    for (int k = 0; k < 4; ++k) {
        f[k] = y[4 + k];
        double a = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a += G(k, i, j).value() * y[4 + i] * y[4 + j];
        f[4 + k] = -a;
    }
    return f;
}

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State r = y;
    for (const auto& [w, k] : terms)
        for (int i = 0; i < 8; ++i) r[i] += h * w * (*k)[i];
    return r;
}

GeodesicState to_state(const State& y, double t) {
    return {{y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]}, t};
}

double norm_inf(const State& y) {
    double m = 0.0;
    for (double v : y) m = std::max(m, std::fabs(v));
    return m;
}

bool finite(const State& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

} // namespace

std::string to_string(GeodesicStatus s) {
    switch (s) {
    case GeodesicStatus::Reached: return "reached";
    case GeodesicStatus::Blowup: return "blowup";
    case GeodesicStatus::StepUnderflow: return "step-underflow";
    }
    return "unknown";
}

double geodesic_energy(const WalkerMetric& g, const GeodesicState& s) {
    const MetricAt m = metric_at(g, s.x);
    double e = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) e += m.g[i][j] * s.v[i] * s.v[j];
    return e;
}

GeodesicResult integrate_geodesic(const WalkerMetric& g, const GeodesicState& init, double t_end,
                                  const GeodesicOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("integration tolerance must be positive");
    GeodesicResult r;
    State y{init.x[0], init.x[1], init.x[2], init.x[3], init.v[0], init.v[1], init.v[2], init.v[3]};
    double t = init.t;
    const double dir = t_end >= t ? 1.0 : -1.0;
    r.energy0 = geodesic_energy(g, init);
    r.last = init;
    if (opts.record) {
        r.trajectory.push_back(init);
        r.energy.push_back(r.energy0);
    }
    double h = dir * std::min(1e-2, std::fabs(t_end - t));
    State k1 = rhs(g, y);
    while (dir * (t_end - t) > 0.0) {
        if (r.accepted + r.rejected >= opts.max_steps)
            throw StepUnderflowError(r.last, "step budget exhausted at t = " + std::to_string(t));
        if (dir * (t + h - t_end) > 0.0) h = t_end - t;
        if (std::fabs(h) < opts.min_step)
            throw StepUnderflowError(r.last, "step size underflow at t = " + std::to_string(t));

        State y5, k7;
        double err = 0.0;
        bool ok = true;
        try {
            const State k2 = rhs(g, axpy(y, h, {{a21, &k1}}));
            const State k3 = rhs(g, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
            const State k4 = rhs(g, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
            const State k5 = rhs(g, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
            const State k6 = rhs(g, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
            y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            k7 = rhs(g, y5);
            for (int i = 0; i < 8; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc = opts.tol * (1.0 + std::max(std::fabs(y[i]), std::fabs(y5[i])));
                err = std::max(err, std::fabs(e) / sc);
            }
            ok = finite(y5) && std::isfinite(err);
        } catch (const DomainError&) {
            ok = false;
        }
        if (!ok) {
            ++r.rejected;
            h *= 0.25;
            continue;
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;
            ++r.accepted;
            r.last = to_state(y, t);
            const double e = geodesic_energy(g, r.last);
            r.max_energy_drift = std::max(r.max_energy_drift, std::fabs(e - r.energy0));
            if (opts.record) {
                r.trajectory.push_back(r.last);
                r.energy.push_back(e);
            }
            if (norm_inf(y) > opts.blowup) {
                r.status = GeodesicStatus::Blowup;
                return r;
            }
            const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= fac;
        } else {
            ++r.rejected;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }
    r.status = GeodesicStatus::Reached;
    return r;
}

void write_trajectory_csv(std::ostream& os, const GeodesicResult& r) {
    auto num = [](double v) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
        return std::string(buf, res.ptr);
    };
    os << "t,x1,x2,xp1,xp2,v1,v2,v3,v4,E\n";
    for (std::size_t n = 0; n < r.trajectory.size(); ++n) {
        const auto& s = r.trajectory[n];
        os << num(s.t);
        for (double v : s.x) os << ',' << num(v);
        for (double v : s.v) os << ',' << num(v);
        os << ',' << num(n < r.energy.size() ? r.energy[n] : 0.0) << '\n';
    }
}

ProbeReport completeness_probe(const WalkerMetric& g, const ProbeConfig& cfg) {
    ProbeReport rep;
    rep.t_max = cfg.t_max;
    UniformStream rng(cfg.seed);
    for (int n = 0; n < cfg.count; ++n) {
        ProbeSeed s;
        for (auto& v : s.init.x) v = rng.next(-cfg.half_width, cfg.half_width);
        for (auto& v : s.init.v) v = rng.next(-cfg.half_width, cfg.half_width);
        for (int side = 0; side < 2; ++side) {
            const double target = side == 0 ? cfg.t_max : -cfg.t_max;
            GeodesicStatus st;
            double reached;
            try {
                const GeodesicResult r = integrate_geodesic(g, s.init, target, cfg.options);
                st = r.status;
                reached = r.last.t;
                s.max_energy_drift = std::max(s.max_energy_drift, r.max_energy_drift);
            } catch (const StepUnderflowError& e) {
                st = GeodesicStatus::StepUnderflow;
                reached = e.last().t;
                if (!s.note.empty()) s.note += "; ";
                s.note += e.what();
            } catch (const Error& e) {
                st = GeodesicStatus::StepUnderflow;
                reached = 0.0;
                if (!s.note.empty()) s.note += "; ";
                s.note += e.what();
            }
            (side == 0 ? s.forward : s.backward) = st;
            (side == 0 ? s.t_forward : s.t_backward) = reached;
        }
        if (s.reached()) ++rep.reached;
        rep.seeds.push_back(std::move(s));
    }
    return rep;
}

} // namespace walkerlab
