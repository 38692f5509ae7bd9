#include "walkerlab/soliton.hpp"

#include <algorithm>
#include <cmath>

#include "walkerlab/errors.hpp"

namespace walkerlab {

namespace {

constexpr int N = kDim;

bool canonical_extension(const WalkerMetric& g) {
    return g.extension && g.extension->t.literally_canonical_nilpotent();
}

void require_canonical(const EndoField& t) {
    if (!t.literally_canonical_nilpotent())
        throw NormalFormError("T", "chart not canonical: T must satisfy T d1 = d2, T d2 = 0");
}

} // namespace

SolitonReport soliton_residual(const SolitonData& d, const Sampler& sampler, double tol) {
    SolitonReport r;
    bool first = true;
    double lmin = 0.0, lmax = 0.0;
    for (const auto& p : sampler.points()) {
        Curvature c(metric_jet(d.metric, p, 2));
        const Jet fj = d.f.jet(p, 2);
        const JetTensor H = hessian(c, fj);
        const JetTensor& rho = c.ricci();
        const auto& g = c.metric().g;
        const auto& gi = c.metric().ginv;

        // g(d1, dxp1) = 1 on every Walker chart
        const double lp = H(0, 2).value() + rho(0, 2).value();
        if (first) {
            r.lambda = d.lambda ? *d.lambda : lp;
            lmin = lmax = lp;
            first = false;
        }
        lmin = std::min(lmin, lp);
        lmax = std::max(lmax, lp);

        double res = 0.0, lap = 0.0, gn = 0.0, gs = 0.0;
        for (int i = 0; i < N; ++i) {
            gs = std::max(gs, std::fabs(fj.d(i)));
            for (int j = 0; j < N; ++j) {
                res = std::max(res, std::fabs(H(i, j).value() + rho(i, j).value() - r.lambda * g[i][j].value()));
                lap += gi[i][j].value() * H(i, j).value();
                gn += gi[i][j].value() * fj.d(i) * fj.d(j);
            }
        }
        const double trace = std::fabs(lap + c.scalar().value() - 4.0 * r.lambda);
        if (!r.worst_point || res > r.residual) r.worst_point = p;
        r.residual = std::max(r.residual, res);
        r.grad_norm = std::max(r.grad_norm, std::fabs(gn));
        r.grad_size = std::max(r.grad_size, gs);
        r.trace_identity = std::max(r.trace_identity, trace);
        ++r.samples;
    }
    r.lambda_spread = lmax - lmin;
    r.soliton = r.samples > 0 && r.residual <= tol && (d.lambda || r.lambda_spread <= tol);
    r.steady = r.soliton && std::fabs(r.lambda) <= tol;
    r.isotropic = r.soliton && r.grad_norm <= tol && r.grad_size > tol;
    if (!r.soliton)
        r.verdict = "not a soliton";
    else if (r.grad_size <= tol)
        r.verdict = r.steady ? "trivial steady" : "trivial Einstein";
    else if (r.steady)
        r.verdict = r.isotropic ? "steady isotropic" : "steady";
    else
        r.verdict = r.lambda > 0 ? "shrinking" : "expanding";
    return r;
}

BachFlatFamily build_bachflat_family(const AffineSurface& s, const EndoField& t, const Expression& h,
                                     const Expression& phi11, const Expression& phi12, FamilyMode mode,
                                     const Sampler& sampler, double tol) {
    require_canonical(t);
    require_base_field(h, "potential h");
    const auto rho = affine_ricci_expr(s);
    const Expression rho_sym11 = rho[0][0];
    BachFlatFamily out;
    out.phi.p11 = phi11;
    out.phi.p12 = phi12;
    if (mode == FamilyMode::Soliton) {
        // ker T = span{d2}
        const ZeroVerdict z = zero_test(differentiate(h, Coord::X2), sampler, tol);
        if (!z.zero)
            throw RejectedError("steady soliton family needs dh(ker T) = 0, found dh(d2) = " +
                                std::to_string(z.witness_value));
        const auto hes = affine_hessian_expr(s, h);
        out.phi.p22 = -(hes[0][0] + Expression(2) * rho_sym11);
        out.data.f = h;
    } else {
        out.phi.p22 = -(Expression(2) * rho_sym11);
        out.data.f = Expression(0);
    }
    out.metric = build_metric(s, &out.phi, &t);
    out.data.metric = out.metric;
    out.data.lambda = std::nullopt;
    return out;
}

TensorValue cotton_weyl_gradient(Curvature& c, const Jet& u, double weight) {
    const TensorValue C = values_of(c.cotton());
    const TensorValue W = values_of(c.weyl());
    const auto& gi = c.metric().ginv;
    std::array<double, N> up{};
    for (int l = 0; l < N; ++l)
        for (int m = 0; m < N; ++m) up[l] += weight * gi[l][m].value() * u.d(m);
    TensorValue D(0, 3);
    D.point = c.metric().point;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                double v = C(i, j, k);
                for (int l = 0; l < N; ++l) v += W(i, j, k, l) * up[l];
                D(i, j, k) = v;
            }
    return D;
}

DTensorReport dtensor_harmonicweyl(const SolitonData& d, const Sampler& sampler, double tol) {
    DTensorReport r;
    const bool canon = canonical_extension(d.metric);
    const bool base_potential = !d.f.depends_on(Coord::X2) && !d.f.depends_on(Coord::XP1) &&
                                !d.f.depends_on(Coord::XP2);
    for (const auto& p : sampler.points()) {
        Curvature c(metric_jet(d.metric, p, 3));
        const Jet fj = d.f.jet(p, 1);
        const TensorValue D = cotton_weyl_gradient(c, fj);
        const double dm = max_abs(D);
        if (!r.worst_point || dm > r.d_max) {
            r.worst_point = p;
            r.worst = D;
        }
        r.d_max = std::max(r.d_max, dm);
        r.cotton_max = std::max(r.cotton_max, max_abs(values_of(c.cotton())));
        if (canon) {
            const auto& ext = *d.metric.extension;
            const Point2 b{p[0], p[1]};
            const Jet p22 = ext.phi.p22.jet({p[0], p[1], 0.0, 0.0}, 1);
            const auto rj = affine_ricci_jets(ext.surface, b, 2);
            const double f = std::fabs(p22.d(1) + 2.0 * rj.rho_sym[0][0].d(1));
            r.formula_residual = std::max(r.formula_residual.value_or(0.0), f);
            if (base_potential) {
                const auto G = ext.surface.jets(b, 1);
                const double closed = -2.0 * fj.d(0) * G[0].d(1);
                const double dev = std::fabs(D(0, 1, 0) - closed);
                r.closed_form_deviation = std::max(r.closed_form_deviation.value_or(0.0), dev);
            }
        }
        ++r.samples;
    }
    r.d_zero = r.samples > 0 && r.d_max <= tol;
    r.harmonic_weyl = r.samples > 0 && r.cotton_max <= tol;
    return r;
}

CeReport ce_residual(const Expression& phi, const WalkerMetric& g, const Sampler& sampler, double tol) {
    CeReport r;
    r.einstein_checked = true;
    bool first = true;
    for (const auto& p : sampler.points()) {
        const Jet ph = phi.jet(p, 2);
        if (!(ph.value() > 0.0))
            throw DomainError("conformal factor must be positive, got " + std::to_string(ph.value()));
        const MetricJet mj = metric_jet(g, p, 2);
        Curvature c(mj);
        const JetTensor H = hessian(c, ph);
        const JetTensor& rho = c.ricci();
        double lap = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) lap += mj.ginv[i][j].value() * H(i, j).value();
        const double v = ph.value(), tau = c.scalar().value();
        double e = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                e = std::max(e, std::fabs(2.0 * H(i, j).value() + v * rho(i, j).value() -
                                          0.25 * (2.0 * lap + v * tau) * mj.g[i][j].value()));
        if (!r.witness || e > r.residual) r.witness = p;
        r.residual = std::max(r.residual, e);

        Curvature cb(conformal_rescale(mj, ph));
        const double lb = cb.scalar().value() / 4.0;
        if (first) {
            r.lambda_bar = lb;
            first = false;
        }
        double eb = 0.0;
        const JetTensor& rb = cb.ricci();
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                eb = std::max(eb, std::fabs(rb(i, j).value() - lb * cb.metric().g[i][j].value()));
        r.einstein_residual = std::max(r.einstein_residual, eb);
        ++r.samples;
    }
    r.conformally_einstein = r.samples > 0 && r.residual <= tol && r.einstein_residual <= 10.0 * tol;
    return r;
}

CeStructuredReport ce_structured(const ConformalData& cd, const AffineSurface& s, const EndoField& t,
                                 const SymForm2& phi, const Sampler& sampler, double tol) {
    require_canonical(t);
    require_base_field(cd.phi, "conformal factor phi");
    CeStructuredReport r;
    Expression factor = cd.phi;
    if (cd.kappa) {
        std::string off;
        if (!in_normal_form_chart(s, &off))
            throw NormalFormError(off, "case (ii) needs the normal form: " + off + " must vanish");
        if (*cd.kappa == 0.0) throw DegenerateError("kappa = 0 reduces to case (i)");
        r.which = 2;
        factor = Expression::decimal(*cd.kappa) * var(Coord::XP2) + cd.phi;
    }
    const WalkerMetric g = build_metric(s, &phi, &t);
    double worst = -1.0;
    for (const auto& p : sampler.points()) {
        const Point2 b{p[0], p[1]};
        const Point4 bp{p[0], p[1], 0.0, 0.0};
        const Jet f = cd.phi.jet(bp, 2);
        const auto G = s.jets(b, 0);
        auto gam = [&](int i, int j, int k) { return G[i * 4 + j * 2 + k].value(); };
        const auto rj = affine_ricci_jets(s, b, 2);
        double hes[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) hes[i][j] = f.d(i, j) - gam(i, j, 0) * f.d(0) - gam(i, j, 1) * f.d(1);
        const double p22 = phi.p22.eval(bp);
        double e1 = 0.0, e2 = 0.0;
        if (r.which == 1) {
            // phi Phi_hat + 2 (Hes phi + phi rho_sym), Phi_hat = Phi_22 dx1 dx1
            e1 = std::fabs(f.value() * p22 + 2.0 * (hes[0][0] + f.value() * rj.rho_sym[0][0].value()));
            for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 1}})
                e2 = std::max(e2, std::fabs(2.0 * (hes[i][j] + f.value() * rj.rho_sym[i][j].value())));
            r.dphi_kernel = std::max(r.dphi_kernel.value_or(0.0), std::fabs(f.d(1)));
        } else {
            const double k = *cd.kappa;
            const Jet p11 = phi.p11.jet(bp, 1), p12 = phi.p12.jet(bp, 1);
            e1 = std::fabs(f.d(1) - 0.5 * k * p22);
            e2 = std::fabs(hes[0][0] + f.value() * rj.rho[0][0].value() +
                           0.5 * (f.value() + 2.0 * k * gam(0, 0, 1)) * p22 -
                           0.5 * k * (2.0 * p12.d(0) - p11.d(1)));
        }
        r.first = std::max(r.first, e1);
        r.second = std::max(r.second, e2);
        const double e = std::max(e1, e2);
        if (e > worst) {
            worst = e;
            r.witness = p;
        }
        ++r.samples;

        const Jet F = factor.jet(p, 1);
        if (!(F.value() > 0.0)) {
            ++r.skipped;
            continue;
        }
        Curvature c(metric_jet(g, p, 4));
        const Jet sigma = -log(F);
        r.cotton_condition = std::max(r.cotton_condition, max_abs(cotton_weyl_gradient(c, sigma, 2.0)));
        r.bach = std::max(r.bach, max_abs(c.bach().bach));
    }
    r.residual = std::max(r.first, r.second);
    if (r.which == 1) r.residual = std::max(r.residual, r.dphi_kernel.value_or(0.0));
    r.holds = r.samples > 0 && r.residual <= tol;
    r.necessary_hold = r.samples > r.skipped && r.cotton_condition <= tol && r.bach <= tol;
    return r;
}

} // namespace walkerlab
