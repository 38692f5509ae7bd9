#include "walkerlab/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "walkerlab/curvature.hpp"
#include "walkerlab/duality.hpp"
#include "walkerlab/errors.hpp"
#include "walkerlab/geodesics.hpp"
#include "walkerlab/soliton.hpp"

namespace walkerlab {

namespace {

// A residual of this size marks "required to be non-zero but vanished".
constexpr double kNonzeroFloor = 1e-6;

struct Outcome {
    double residual = 0.0;
    std::optional<Point4> witness;
    Json details = Json::object();
};

using CheckFn = std::function<Outcome(const CheckSpec&, const CheckContext&)>;

struct Entry {
    std::string name;
    double tol;
    std::vector<std::string> params;
    CheckFn fn;
};

void track(Outcome& o, double v, const Point4& p) {
    if (!o.witness || v > o.residual) {
        o.residual = v;
        o.witness = p;
    }
}

Expression param_expr(const CheckSpec& spec, const char* key, bool required = true,
                      const char* fallback = "0") {
    if (!spec.params.contains(key)) {
        if (required) throw ScenarioError("check '" + spec.name + "' needs parameter '" + key + "'");
        return parse(fallback);
    }
    const auto& v = spec.params.at(key);
    if (!v.is_string()) throw ScenarioError("checks." + spec.name + "." + key + ": expected an expression string");
    try {
        return parse(v.get<std::string>());
    } catch (const ParseError& e) {
        throw ScenarioError("checks." + spec.name + "." + key + ": " + e.what());
    }
}

double param_number(const CheckSpec& spec, const char* key, double fallback) {
    if (!spec.params.contains(key)) return fallback;
    const auto& v = spec.params.at(key);
    if (!v.is_number()) throw ScenarioError("checks." + spec.name + "." + key + ": expected a number");
    return v.get<double>();
}

int coord_index(const std::string& s) {
    static const char* names[4] = {"x1", "x2", "xp1", "xp2"};
    for (int i = 0; i < 4; ++i)
        if (s == names[i]) return i;
    throw ScenarioError("unknown coordinate name '" + s + "' (use x1, x2, xp1, xp2)");
}

// Curvature sweeps ----------------------------------------------------------

Outcome bach_zero(const CheckSpec&, const CheckContext& c) {
    Outcome o;
    double disc = 0.0;
    for (const auto& p : c.sampler.points()) {
        Curvature cv(metric_jet(c.model.metric, p, 4));
        const BachResult b = cv.bach();
        disc = std::max(disc, b.discrepancy);
        track(o, max_abs(b.bach), p);
    }
    o.details["max_formula_discrepancy"] = disc;
    return o;
}

Outcome bach_consistency(const CheckSpec&, const CheckContext& c) {
    Outcome o;
    double literal = 0.0;
    for (const auto& p : c.sampler.points()) {
        Curvature cv(metric_jet(c.model.metric, p, 4));
        const BachResult b = cv.bach(std::numeric_limits<double>::infinity());
        double lit = 0.0;
        for (std::size_t n = 0; n < b.bach.size(); ++n)
            lit = std::max(lit, std::fabs(b.bach[n] - 0.5 * (-b.div1_cotton[n] + b.weyl_rho[n])));
        literal = std::max(literal, lit);
        track(o, b.discrepancy, p);
    }
    o.details["max_literal_sign_deviation"] = literal;
    return o;
}

Outcome bach_value(const CheckSpec& spec, const CheckContext& c) {
    if (!spec.params.contains("point") || !spec.params.contains("component") || !spec.params.contains("value"))
        throw ScenarioError("check 'bach-value' needs point, component and value");
    const auto pj = spec.params.at("point");
    const auto cj = spec.params.at("component");
    if (!pj.is_array() || pj.size() != 4 || !cj.is_array() || cj.size() != 2)
        throw ScenarioError("checks.bach-value: point must have 4 numbers, component 2 coordinate names");
    Point4 p{};
    for (int i = 0; i < 4; ++i) p[i] = pj[i].get<double>();
    const int i = coord_index(cj[0].get<std::string>()), j = coord_index(cj[1].get<std::string>());
    const double want = param_number(spec, "value", 0.0);
    Curvature cv(metric_jet(c.model.metric, p, 4));
    const double got = cv.bach().bach(i, j);
    Outcome o;
    o.residual = std::fabs(got - want);
    o.witness = p;
    o.details["computed"] = got;
    o.details["expected_value"] = want;
    return o;
}

template <class F>
Outcome pointwise(const CheckContext& c, int order, F&& f) {
    Outcome o;
    for (const auto& p : c.sampler.points()) {
        Curvature cv(metric_jet(c.model.metric, p, order));
        track(o, f(cv), p);
    }
    return o;
}

Outcome ricci_flat(const CheckSpec&, const CheckContext& c) {
    double tau = 0.0;
    Outcome o = pointwise(c, 2, [&](Curvature& cv) {
        tau = std::max(tau, std::fabs(cv.scalar().value()));
        return max_abs(values_of(cv.ricci()));
    });
    o.details["max_abs_scalar"] = tau;
    return o;
}

Outcome einstein(const CheckSpec&, const CheckContext& c) {
    return pointwise(c, 2, [](Curvature& cv) {
        const TensorValue r = values_of(cv.ricci());
        const double l = cv.scalar().value() / 4.0;
        double m = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m = std::max(m, std::fabs(r(i, j) - l * cv.metric().g[i][j].value()));
        return m;
    });
}

Outcome ricci_nilpotent(const CheckSpec&, const CheckContext& c) {
    return pointwise(c, 2, [](Curvature& cv) {
        const TensorValue r = values_of(cv.ricci());
        const auto& gi = cv.metric().ginv;
        double m = std::fabs(cv.scalar().value());
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double v = 0.0;
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l) v += r(i, k) * gi[k][l].value() * r(l, j);
                m = std::max(m, std::fabs(v));
            }
        return m;
    });
}

Outcome cotton_zero(const CheckSpec&, const CheckContext& c) {
    return pointwise(c, 3, [](Curvature& cv) { return max_abs(values_of(cv.cotton())); });
}

// Duality ---------------------------------------------------------------------

Outcome duality_sweep(const CheckContext& c, const std::function<double(const DualityReport&)>& f,
                      Json* extra = nullptr) {
    Outcome o;
    double wminus_min = std::numeric_limits<double>::infinity();
    int rank = 0;
    for (const auto& p : c.sampler.points()) {
        const DualityReport d = weyl_split(c.model.metric, p);
        wminus_min = std::min(wminus_min, d.max_minus);
        rank = std::max(rank, d.minus_rank);
        track(o, f(d), p);
    }
    if (extra) {
        (*extra)["min_max_abs_wminus"] = c.sampler.size() ? wminus_min : 0.0;
        (*extra)["max_rank_wminus"] = rank;
    }
    return o;
}

Outcome self_dual(const CheckSpec&, const CheckContext& c) {
    return duality_sweep(c, [](const DualityReport& d) { return d.max_minus; });
}

Outcome anti_self_dual(const CheckSpec&, const CheckContext& c) {
    return duality_sweep(c, [](const DualityReport& d) { return d.max_plus; });
}

Outcome wminus_nilpotent(const CheckSpec&, const CheckContext& c) {
    Json extra;
    Outcome o = duality_sweep(
        c,
        [](const DualityReport& d) {
            const double traces = std::max({std::fabs(d.minus.tr), std::fabs(d.minus.tr2), std::fabs(d.minus.tr3)});
            const double lack = std::max(0.0, kNonzeroFloor - d.max_minus);
            return std::max({d.minus_squared, traces, lack});
        },
        &extra);
    o.details = extra;
    return o;
}

Outcome asd_system(const CheckSpec&, const CheckContext& c) {
    const auto& s = c.scenario;
    const AsdReport r = asd_obstruction(s.surface, s.t, c.model.phi, c.sampler);
    if (!r.verdicts_agree)
        throw ConsistencyError("anti-self-duality equations and the Weyl split disagree");
    Outcome o;
    o.residual = std::max(r.first_residual, r.scalar_residual);
    o.witness = r.worst_point;
    o.details["first_equation"] = r.first_residual;
    o.details["scalar_min"] = r.scalar_min;
    o.details["scalar_max"] = r.scalar_max;
    o.details["max_abs_wplus"] = r.max_wplus;
    return o;
}

Outcome closed_form_wplus(const CheckSpec&, const CheckContext& c) {
    Outcome o;
    double trace = 0.0;
    for (const auto& p : c.sampler.points()) {
        const ClosedFormWplus w = closed_form_wplus_crosscheck(c.model.metric, p);
        trace = std::max(trace, std::fabs(w.trace));
        track(o, w.deviation, p);
    }
    o.details["max_abs_closed_form_trace"] = trace;
    return o;
}

// Solitons and conformal checks ----------------------------------------------

SolitonData soliton_data(const CheckSpec& spec, const CheckContext& c) {
    SolitonData d;
    d.metric = c.model.metric;
    d.f = spec.params.contains("f") ? param_expr(spec, "f") : c.model.f;
    if (spec.params.contains("lambda")) d.lambda = param_number(spec, "lambda", 0.0);
    return d;
}

void soliton_details(Outcome& o, const SolitonReport& r) {
    o.details["lambda"] = r.lambda;
    o.details["lambda_spread"] = r.lambda_spread;
    o.details["max_gradient_norm"] = r.grad_norm;
    o.details["trace_identity"] = r.trace_identity;
    o.details["verdict"] = r.verdict;
}

Outcome soliton(const CheckSpec& spec, const CheckContext& c) {
    const SolitonReport r = soliton_residual(soliton_data(spec, c), c.sampler);
    Outcome o;
    o.residual = std::max(r.residual, spec.params.contains("lambda") ? 0.0 : r.lambda_spread);
    o.witness = r.worst_point;
    soliton_details(o, r);
    return o;
}

Outcome steady_isotropic(const CheckSpec& spec, const CheckContext& c) {
    const SolitonReport r = soliton_residual(soliton_data(spec, c), c.sampler);
    Outcome o;
    const double lack = std::max(0.0, kNonzeroFloor - r.grad_size);
    o.residual = std::max({r.residual, r.lambda_spread, std::fabs(r.lambda), r.grad_norm, lack});
    o.witness = r.worst_point;
    soliton_details(o, r);
    return o;
}

Outcome d_tensor_zero(const CheckSpec& spec, const CheckContext& c) {
    const DTensorReport r = dtensor_harmonicweyl(soliton_data(spec, c), c.sampler);
    Outcome o;
    o.residual = r.d_max;
    o.witness = r.worst_point;
    o.details["max_abs_cotton"] = r.cotton_max;
    if (r.formula_residual) o.details["harmonic_weyl_formula"] = *r.formula_residual;
    if (r.closed_form_deviation) o.details["closed_form_d121_deviation"] = *r.closed_form_deviation;
    return o;
}

Outcome conformally_einstein(const CheckSpec& spec, const CheckContext& c) {
    const CeReport r = ce_residual(param_expr(spec, "phi"), c.model.metric, c.sampler);
    Outcome o;
    // the rescaled-metric check carries two more derivative layers
    o.residual = std::max(r.residual, r.einstein_residual / 10.0);
    o.witness = r.witness;
    o.details["max_abs_E"] = r.residual;
    o.details["rescaled_einstein_residual"] = r.einstein_residual;
    o.details["lambda_bar"] = r.lambda_bar;
    return o;
}

Outcome ce_case(const CheckSpec& spec, const CheckContext& c, bool second) {
    ConformalData cd;
    cd.phi = param_expr(spec, "phi");
    if (second) {
        if (!spec.params.contains("kappa")) throw ScenarioError("check '" + spec.name + "' needs parameter 'kappa'");
        cd.kappa = param_number(spec, "kappa", 0.0);
    }
    const auto& s = c.scenario;
    const CeStructuredReport r = ce_structured(cd, s.surface, s.t, c.model.phi, c.sampler);
    Outcome o;
    o.residual = r.residual;
    o.witness = r.witness;
    o.details["first"] = r.first;
    o.details["second"] = r.second;
    if (r.dphi_kernel) o.details["dphi_kernel"] = *r.dphi_kernel;
    o.details["cotton_weyl_condition"] = r.cotton_condition;
    o.details["bach"] = r.bach;
    o.details["skipped_nonpositive_factor"] = r.skipped;
    return o;
}

Outcome ce_case_i(const CheckSpec& spec, const CheckContext& c) { return ce_case(spec, c, false); }
Outcome ce_case_ii(const CheckSpec& spec, const CheckContext& c) { return ce_case(spec, c, true); }

Outcome affine_soliton(const CheckSpec& spec, const CheckContext& c) {
    const Expression h = spec.params.contains("h") ? param_expr(spec, "h") : c.model.f;
    const AgrsReport r = agrs_residual(c.scenario.surface, h, &c.scenario.t, c.sampler);
    Outcome o;
    o.residual = std::max(r.residual, r.dh_kernel.value_or(0.0));
    o.witness = r.worst_point;
    o.details["hessian_residual"] = r.residual;
    if (r.dh_kernel) o.details["dh_kernel"] = *r.dh_kernel;
    if (!r.note.empty()) o.details["note"] = r.note;
    return o;
}

Outcome parallel_nilpotent(const CheckSpec&, const CheckContext& c) {
    const ParallelReport r = parallel_nilpotent_check(c.scenario.surface, c.scenario.t, c.sampler);
    Outcome o;
    const double lack = std::max(0.0, kNonzeroFloor - r.t_norm);
    o.residual = std::max({r.nabla_t_system, r.nabla_t_tensor, r.nilpotency, r.canonical_form.value_or(0.0), lack});
    o.witness = r.nonzero_witness;
    o.details["nabla_t_system"] = r.nabla_t_system;
    o.details["nilpotency"] = r.nilpotency;
    if (r.canonical_form) o.details["canonical_form"] = *r.canonical_form;
    if (r.kernel_geodesic) o.details["kernel_geodesic"] = *r.kernel_geodesic;
    o.details["kernel"] = r.kernel == ParallelReport::Kernel::Line  ? "line"
                          : r.kernel == ParallelReport::Kernel::All ? "all"
                                                                     : "none";
    return o;
}

// Geodesics -------------------------------------------------------------------

Outcome geodesic_complete(const CheckSpec& spec, const CheckContext& c) {
    ProbeConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(param_number(spec, "seed", static_cast<double>(c.sampler.config().seed)));
    cfg.count = static_cast<int>(param_number(spec, "seeds", 16));
    cfg.t_max = param_number(spec, "t_max", 50.0);
    cfg.options.tol = param_number(spec, "tol", 1e-9);
    const ProbeReport r = completeness_probe(c.model.metric, cfg);
    Outcome o;
    o.residual = static_cast<double>(r.seeds.size() - static_cast<std::size_t>(r.reached));
    Json seeds = Json::array();
    for (const auto& s : r.seeds) {
        Json e;
        e["forward"] = to_string(s.forward);
        e["backward"] = to_string(s.backward);
        e["t_forward"] = s.t_forward;
        e["t_backward"] = s.t_backward;
        e["max_energy_drift"] = s.max_energy_drift;
        seeds.push_back(e);
        if (!s.reached() && !o.witness) o.witness = s.init.x;
    }
    o.details["t_max"] = r.t_max;
    o.details["reached"] = r.reached;
    o.details["seeds"] = seeds;
    return o;
}

Outcome geodesic_energy_check(const CheckSpec& spec, const CheckContext& c) {
    GeodesicSetup g = c.scenario.geodesic.value_or(GeodesicSetup{{0, 0, 0, 1}, {1, 0, 0, 0}, 2.0, 1e-9});
    g.t_end = param_number(spec, "t_end", g.t_end);
    GeodesicOptions opts;
    opts.tol = param_number(spec, "tol", g.tol);
    opts.record = false;
    const GeodesicResult r = integrate_geodesic(c.model.metric, {g.x0, g.v0, 0.0}, g.t_end, opts);
    Outcome o;
    o.residual = r.status == GeodesicStatus::Reached ? r.max_energy_drift : std::numeric_limits<double>::max();
    o.witness = r.last.x;
    o.details["status"] = to_string(r.status);
    o.details["t_reached"] = r.last.t;
    o.details["energy0"] = r.energy0;
    o.details["max_energy_drift"] = r.max_energy_drift;
    return o;
}

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r = {
        {"bach-zero", 1e-8, {}, bach_zero},
        {"bach-consistency", 1e-8, {}, bach_consistency},
        {"bach-value", 1e-9, {"point", "component", "value"}, bach_value},
        {"ricci-flat", 1e-9, {}, ricci_flat},
        {"einstein", 1e-9, {}, einstein},
        {"ricci-nilpotent", 1e-9, {}, ricci_nilpotent},
        {"cotton-zero", 1e-9, {}, cotton_zero},
        {"self-dual", 1e-8, {}, self_dual},
        {"anti-self-dual", 1e-8, {}, anti_self_dual},
        {"weyl-minus-nilpotent", 1e-9, {}, wminus_nilpotent},
        {"asd-system", 1e-8, {}, asd_system},
        {"closed-form-wplus", 1e-7, {}, closed_form_wplus},
        {"soliton", 1e-9, {"f", "lambda"}, soliton},
        {"steady-isotropic", 1e-9, {"f"}, steady_isotropic},
        {"d-tensor-zero", 1e-9, {"f"}, d_tensor_zero},
        {"conformally-einstein", 1e-8, {"phi"}, conformally_einstein},
        {"conformally-einstein-case-i", 1e-8, {"phi"}, ce_case_i},
        {"conformally-einstein-case-ii", 1e-8, {"phi", "kappa"}, ce_case_ii},
        {"affine-soliton", 1e-9, {"h"}, affine_soliton},
        {"parallel-nilpotent", 1e-9, {}, parallel_nilpotent},
        {"geodesic-complete", 0.0, {"seed", "seeds", "t_max", "tol"}, geodesic_complete},
        {"geodesic-energy", 1e-6, {"t_end", "tol"}, geodesic_energy_check},
    };
    return r;
}

const Entry* find_entry(const std::string& name) {
    for (const auto& e : registry())
        if (e.name == name) return &e;
    return nullptr;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

} // namespace

const std::vector<std::string>& registered_checks() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : registry()) v.push_back(e.name);
        return v;
    }();
    return names;
}

bool is_registered_check(const std::string& name) { return find_entry(name) != nullptr; }

double default_tolerance(const std::string& name) {
    const Entry* e = find_entry(name);
    if (!e) throw ScenarioError("unknown check '" + name + "'");
    return e->tol;
}

std::vector<std::string> suggest_checks(const std::string& name) {
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const auto& e : registry()) {
        const std::size_t d = edit_distance(name, e.name);
        const bool prefix = name.size() >= 3 && e.name.compare(0, 3, name, 0, 3) == 0;
        if (d <= 3 || prefix) scored.emplace_back(d, e.name);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    for (auto& [d, n] : scored) out.push_back(n);
    return out;
}

std::vector<std::string> check_parameters(const std::string& name) {
    const Entry* e = find_entry(name);
    return e ? e->params : std::vector<std::string>{};
}

CheckResult run_check(const CheckSpec& spec, const CheckContext& ctx) {
    const Entry* e = find_entry(spec.name);
    if (!e) throw ScenarioError("unknown check '" + spec.name + "'");
    CheckResult r;
    r.name = spec.name;
    r.expect_pass = spec.expect_pass;
    r.tolerance = ctx.tol_override ? *ctx.tol_override : spec.tol.value_or(e->tol);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Outcome o = e->fn(spec, ctx);
        r.residual = o.residual;
        r.witness = o.witness;
        r.details = std::move(o.details);
        r.pass = std::isfinite(r.residual) && r.residual <= r.tolerance;
    } catch (const ScenarioError&) {
        throw;
    } catch (const ParseError&) {
        throw;
    } catch (const NormalFormError&) {
        throw;
    } catch (const RejectedError&) {
        throw;
    } catch (const Error& ex) {
        r.error = ex.what();
        r.residual = std::numeric_limits<double>::max();
        r.pass = false;
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace walkerlab
