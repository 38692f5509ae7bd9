#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "walkerlab/affine.hpp"
#include "walkerlab/sampler.hpp"
#include "walkerlab/walker_metric.hpp"

namespace testkit {

using walkerlab::Expression;
using walkerlab::Point4;
using Json = nlohmann::json;

inline Json load_oracle(const std::string& name) {
    std::ifstream in(std::string(WALKERLAB_ORACLE_DIR) + "/" + name);
    if (!in) throw std::runtime_error("missing oracle file " + name);
    return Json::parse(in);
}

inline std::string fixture_path(const std::string& id) { return std::string(WALKERLAB_FIXTURE_DIR) + "/" + id + ".json"; }

inline walkerlab::WalkerMetric metric(const std::string& a, const std::string& b, const std::string& c) {
    return {walkerlab::parse(a), walkerlab::parse(b), walkerlab::parse(c), std::nullopt};
}

inline Point4 point_of(const Json& j) { return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()}; }

/// Sampler that yields exactly the point p.
inline walkerlab::Sampler at_point(const Point4& p) {
    walkerlab::SamplerConfig cfg;
    cfg.count = 1;
    for (int i = 0; i < 4; ++i) cfg.box[i] = {p[i], std::nextafter(p[i], 2.0 + std::fabs(p[i]))};
    return walkerlab::Sampler(cfg);
}

inline walkerlab::Sampler small_sampler(std::uint64_t seed, int count) {
    walkerlab::SamplerConfig cfg;
    cfg.seed = seed;
    cfg.count = count;
    return walkerlab::Sampler(cfg);
}

inline std::string rational_text(int num, int den) {
    std::ostringstream os;
    os << "(" << num << "/" << den << ")";
    return os.str();
}

/// Random polynomial of degree <= deg in the listed variables, small rational coefficients.
inline std::string random_poly(walkerlab::UniformStream& rng, int deg, bool fibre, int terms = 4) {
    static const char* base[] = {"1", "x1", "x2", "x1^2", "x1*x2", "x2^2"};
    static const char* all[] = {"1", "x1", "x2", "xp1", "xp2", "x1^2", "x1*x2", "x2^2", "xp1^2",
                                "xp1*xp2", "xp2^2", "x1*xp1", "x1*xp2", "x2*xp1", "x2*xp2"};
    const int n = fibre ? (deg >= 2 ? 15 : 5) : (deg >= 2 ? 6 : 3);
    std::string s;
    for (int k = 0; k < terms; ++k) {
        int c = rng.next_int(-3, 3);
        if (c == 0) c = 1;
        if (!s.empty()) s += " + ";
        s += rational_text(c, 2) + "*" + (fibre ? all[rng.next_int(0, n - 1)] : base[rng.next_int(0, n - 1)]);
    }
    return s;
}

inline walkerlab::WalkerMetric random_walker(walkerlab::UniformStream& rng) {
    return metric(random_poly(rng, 2, true), random_poly(rng, 2, true), random_poly(rng, 2, true));
}

/// Canonical nilpotent extension with parallel T: Gamma_11^1 = Gamma_12^2 = G, Gamma_11^2 = H.
struct NilpotentCase {
    walkerlab::AffineSurface surface;
    walkerlab::EndoField t = walkerlab::EndoField::canonical_nilpotent();
    walkerlab::SymForm2 phi;
    walkerlab::WalkerMetric metric;
};

inline NilpotentCase random_nilpotent(walkerlab::UniformStream& rng) {
    NilpotentCase c;
    const Expression g = walkerlab::parse(random_poly(rng, 2, false, 3));
    c.surface.set_gamma(0, 0, 0, g);
    c.surface.set_gamma(0, 1, 1, g);
    c.surface.set_gamma(0, 0, 1, walkerlab::parse(random_poly(rng, 2, false, 3)));
    c.phi = {walkerlab::parse(random_poly(rng, 2, false)), walkerlab::parse(random_poly(rng, 2, false)),
             walkerlab::parse(random_poly(rng, 2, false))};
    c.metric = walkerlab::build_metric(c.surface, &c.phi, &c.t);
    return c;
}

inline walkerlab::Point4 random_point(walkerlab::UniformStream& rng, double w = 1.0) {
    return {rng.next(-w, w), rng.next(-w, w), rng.next(-w, w), rng.next(-w, w)};
}

} // namespace testkit
