#include "walkerlab/walker_metric.hpp"

#include <cmath>

#include "walkerlab/errors.hpp"

namespace walkerlab {

WalkerMetric build_metric(const AffineSurface& s, const SymForm2* phi, const EndoField* t) {
    SymForm2 ph = phi ? *phi : SymForm2{};
    EndoField tt = t ? *t : EndoField{};
    require_base_field(ph.p11, "Phi_11");
    require_base_field(ph.p12, "Phi_12");
    require_base_field(ph.p22, "Phi_22");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            require_base_field(tt.t[i][j], "T_" + std::to_string(i + 1) + "^" + std::to_string(j + 1));

    const Expression xp[2] = {var(Coord::XP1), var(Coord::XP2)};
    // evaluation functions iota T(d_i) = xp_k T_i^k
    Expression iota[2];
    for (int i = 0; i < 2; ++i) iota[i] = xp[0] * tt.t[i][0] + xp[1] * tt.t[i][1];

    Expression block[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            // 1/2 xp_r xp_s (T_i^r T_j^s + T_j^r T_i^s) = iota_i * iota_j
            Expression e = iota[i] * iota[j];
            for (int k = 0; k < 2; ++k) e = e - Expression(2) * xp[k] * s.gamma(i, j, k);
            e = e + ph(i, j);
            block[i][j] = e;
        }
    WalkerMetric g;
    g.a = block[0][0];
    g.b = block[1][1];
    g.c = block[0][1];
    g.extension = ExtensionData{s, ph, tt};
    return g;
}

MetricAt metric_at(const WalkerMetric& g, const Point4& p) {
    const double a = g.a.eval(p), b = g.b.eval(p), c = g.c.eval(p);
    MetricAt m;
    m.g = {{{a, c, 1, 0}, {c, b, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}};
    m.ginv = {{{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, -a, -c}, {0, 1, -c, -b}}};
    // block anti-triangular: det = det(I) * det(I) = 1
    double det = 0.0;
    {
        const auto& M = m.g;
        auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
            return M[r0][c0] * (M[r1][c1] * M[r2][c2] - M[r1][c2] * M[r2][c1]) -
                   M[r0][c1] * (M[r1][c0] * M[r2][c2] - M[r1][c2] * M[r2][c0]) +
                   M[r0][c2] * (M[r1][c0] * M[r2][c1] - M[r1][c1] * M[r2][c0]);
        };
        det = M[0][0] * det3(1, 2, 3, 1, 2, 3) - M[0][1] * det3(1, 2, 3, 0, 2, 3) +
              M[0][2] * det3(1, 2, 3, 0, 1, 3) - M[0][3] * det3(1, 2, 3, 0, 1, 2);
    }
    if (std::fabs(det - 1.0) > 1e-12 * (1.0 + std::fabs(a) * std::fabs(b) + c * c))
        throw ConsistencyError("Walker metric determinant differs from 1");
    return m;
}

MetricJet metric_jet(const WalkerMetric& g, const Point4& p, int order) {
    MetricJet m;
    m.point = p;
    m.order = order;
    const Jet a = g.a.jet(p, order), b = g.b.jet(p, order), c = g.c.jet(p, order);
    const Jet one = Jet::constant(1.0, order), zero(order);
    m.g = {{{a, c, one, zero}, {c, b, zero, one}, {one, zero, zero, zero}, {zero, one, zero, zero}}};
    m.ginv = {{{zero, zero, one, zero}, {zero, zero, zero, one}, {one, zero, -a, -c}, {zero, one, -c, -b}}};
    m.sqrt_abs_det = 1.0;
    return m;
}

MetricJet conformal_rescale(const MetricJet& m, const Jet& phi) {
    if (phi.order() < m.order) throw OrderError("conformal factor jet order below metric order");
    if (!(phi.value() > 0.0)) throw DomainError("conformal factor must be positive");
    const Jet p = phi.truncated(m.order);
    const Jet p2 = p * p;
    const Jet inv2 = reciprocal(p2);
    MetricJet r = m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            r.g[i][j] = m.g[i][j] * inv2;
            r.ginv[i][j] = m.ginv[i][j] * p2;
        }
    r.sqrt_abs_det = m.sqrt_abs_det / std::pow(phi.value(), 4);
    return r;
}

std::array<std::array<Jet, 4>, 4> invert_jet_matrix(const std::array<std::array<Jet, 4>, 4>& a) {
    const int K = a[0][0].order();
    std::array<std::array<Jet, 4>, 4> m = a;
    std::array<std::array<Jet, 4>, 4> inv;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) inv[i][j] = Jet::constant(i == j ? 1.0 : 0.0, K);
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::fabs(m[r][col].value()) > std::fabs(m[piv][col].value())) piv = r;
        if (m[piv][col].value() == 0.0) throw DomainError("singular metric");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        const Jet rp = reciprocal(m[col][col]);
        for (int j = 0; j < 4; ++j) {
            m[col][j] = m[col][j] * rp;
            inv[col][j] = inv[col][j] * rp;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const Jet f = m[r][col];
            for (int j = 0; j < 4; ++j) {
                fma_into(m[r][j], f, m[col][j], -1.0);
                fma_into(inv[r][j], f, inv[col][j], -1.0);
            }
        }
    }
    return inv;
}

std::array<std::array<std::array<Expression, 2>, 2>, 2> nabla_phi_expr(const AffineSurface& s, const SymForm2& phi) {
    const Coord c[2] = {Coord::X1, Coord::X2};
    std::array<std::array<std::array<Expression, 2>, 2>, 2> out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < 2; ++k) {
                Expression e = differentiate(phi(a, b), c[k]);
                for (int m = 0; m < 2; ++m) e = e - s.gamma(k, a, m) * phi(m, b) - s.gamma(k, b, m) * phi(a, m);
                out[a][b][k] = e;
            }
    return out;
}

HatForms hat_forms(const AffineSurface& s, const EndoField& t, const SymForm2& phi, const OneForm2& form) {
    HatForms h;
    const auto& T = t.t;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Expression e;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) e = e + T[i][a] * T[j][b] * phi(a, b);
            h.phi_hat[i][j] = e;
        }
    for (int i = 0; i < 2; ++i) h.form_hat[i] = T[i][0] * form[0] + T[i][1] * form[1];
    const auto np = nabla_phi_expr(s, phi);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                Expression e;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int c = 0; c < 2; ++c) e = e + T[i][a] * T[j][b] * T[k][c] * np[a][b][c];
                h.nabla_phi_hat[i][j][k] = e;
            }
    return h;
}

OneForm2 recurrence_omega_expr(const AffineSurface& s) {
    const Expression d2 = differentiate(s.gamma(0, 0, 1), Coord::X2);
    return {differentiate(d2, Coord::X1) / d2, differentiate(d2, Coord::X2) / d2};
}

OneForm2 recurrence_eta_expr(const AffineSurface& s) {
    const auto rho = affine_ricci_expr(s);
    const Expression& r11 = rho[0][0];
    return {differentiate(r11, Coord::X1) / r11 - Expression(2) * s.gamma(0, 0, 0),
            differentiate(r11, Coord::X2) / r11};
}

} // namespace walkerlab
