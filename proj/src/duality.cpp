#include "walkerlab/duality.hpp"

#include <algorithm>
#include <cmath>

#include "walkerlab/errors.hpp"

namespace walkerlab {

namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

int perm_sign(int i, int j, int k, int l) {
    int a[4] = {i, j, k, l};
    for (int x = 0; x < 4; ++x)
        for (int y = x + 1; y < 4; ++y)
            if (a[x] == a[y]) return 0;
    int s = 1;
    for (int x = 0; x < 4; ++x)
        for (int y = x + 1; y < 4; ++y)
            if (a[x] > a[y]) s = -s;
    return s;
}

Vec6 wedge(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
    Vec6 w;
    for (int A = 0; A < 6; ++A) {
        const int k = kPairs[A][0], l = kPairs[A][1];
        w(A) = a(k) * b(l) - a(l) * b(k);
    }
    return w;
}

Mat6 star_matrix(const Eigen::Matrix4d& gi, double vol) {
    Mat6 S = Mat6::Zero();
    for (int R = 0; R < 6; ++R) {
        const int i = kPairs[R][0], j = kPairs[R][1];
        for (int C = 0; C < 6; ++C) {
            const int a = kPairs[C][0], b = kPairs[C][1];
            double v = 0.0;
            for (int P = 0; P < 6; ++P) {
                const int k = kPairs[P][0], l = kPairs[P][1];
                const int e = perm_sign(i, j, k, l);
                if (!e) continue;
                v += e * (gi(k, a) * gi(l, b) - gi(k, b) * gi(l, a));
            }
            S(R, C) = vol * v;
        }
    }
    return S;
}

SpectralInvariants invariants(const Mat6& m) {
    const Mat6 m2 = m * m;
    return {m.trace(), m2.trace(), (m2 * m).trace()};
}

double max_abs3(const Eigen::Matrix3d& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

BivectorOperators bivector_operators(Curvature& c, Orientation o) {
    const MetricJet& mj = c.metric();
    Eigen::Matrix4d g, gi;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            g(i, j) = mj.g[i][j].value();
            gi(i, j) = mj.ginv[i][j].value();
        }
    BivectorOperators ops;
    for (int A = 0; A < 6; ++A)
        for (int B = 0; B < 6; ++B) {
            const int a = kPairs[A][0], b = kPairs[A][1], cc = kPairs[B][0], d = kPairs[B][1];
            ops.gram(A, B) = gi(a, cc) * gi(b, d) - gi(a, d) * gi(b, cc);
        }
    int sign = 1;
    if (o == Orientation::Minus) sign = -1;
    Mat6 S = star_matrix(gi, mj.sqrt_abs_det);
    if (o == Orientation::Auto) {
        // 2-form dual to the vertical bivector d_xp1 ^ d_xp2
        const Vec6 w = wedge(g.row(2).transpose(), g.row(3).transpose());
        const Vec6 sw = S * w;
        if ((sw + w).norm() < (sw - w).norm()) sign = -1;
    }
    ops.star = sign * S;
    ops.orientation_sign = sign;

    const TensorValue W = values_of(c.weyl());
    for (int R = 0; R < 6; ++R) {
        const int i = kPairs[R][0], j = kPairs[R][1];
        for (int C = 0; C < 6; ++C) {
            const int k = kPairs[C][0], l = kPairs[C][1];
            double v = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) v += W(i, j, a, b) * gi(a, k) * gi(b, l);
            ops.weyl(R, C) = -v;
        }
    }
    return ops;
}

Eigen::Matrix4d random_frame_mix(std::uint64_t seed, const Eigen::Vector4d& eps, double spread) {
    UniformStream rng(seed);
    Eigen::Matrix4d L = Eigen::Matrix4d::Identity();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double t = rng.next(-spread, spread);
            Eigen::Matrix4d R = Eigen::Matrix4d::Identity();
            if (eps(i) * eps(j) > 0) {
                R(i, i) = std::cos(t);
                R(j, j) = std::cos(t);
                R(i, j) = -std::sin(t);
                R(j, i) = std::sin(t);
            } else {
                R(i, i) = std::cosh(t);
                R(j, j) = std::cosh(t);
                R(i, j) = std::sinh(t);
                R(j, i) = std::sinh(t);
            }
            L = L * R;
        }
    return L;
}

DualityReport weyl_split(Curvature& c, const DualityOptions& opts) {
    const BivectorOperators ops = bivector_operators(c, opts.orientation);
    const MetricJet& mj = c.metric();
    DualityReport r;
    r.point = mj.point;
    r.orientation_sign = ops.orientation_sign;

    const Mat6 I = Mat6::Identity();
    const double gscale = std::max(1.0, ops.gram.cwiseAbs().maxCoeff());
    r.star_square_residual = (ops.star * ops.star - I).cwiseAbs().maxCoeff();
    const Mat6 Pp = 0.5 * (I + ops.star);
    const Mat6 Pm = 0.5 * (I - ops.star);
    if (r.star_square_residual > 1e-9 * gscale * gscale || std::fabs(Pp.trace() - 3.0) > 1e-9 * gscale ||
        std::fabs(Pm.trace() - 3.0) > 1e-9 * gscale)
        throw DegenerateError("Hodge star eigenspaces are not 3-dimensional at the point");

    const Mat6 Wp = ops.weyl * Pp;
    const Mat6 Wm = ops.weyl * Pm;
    r.plus = invariants(Wp);
    r.minus = invariants(Wm);
    r.reconstruction = (ops.weyl - Wp - Wm).cwiseAbs().maxCoeff();
    const Mat6 GW = ops.gram * ops.weyl;
    r.self_adjoint_residual = (GW - GW.transpose()).cwiseAbs().maxCoeff();

    // pseudo-orthonormal frame from the spectral decomposition of g
    Eigen::Matrix4d g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = mj.g[i][j].value();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
    std::array<int, 4> order{3, 2, 1, 0}; // positive eigenvalues first
    Eigen::Matrix4d E;
    Eigen::Vector4d eps;
    for (int n = 0; n < 4; ++n) {
        const double lam = es.eigenvalues()(order[n]);
        if (lam == 0.0) throw DegenerateError("degenerate metric");
        E.col(n) = es.eigenvectors().col(order[n]) / std::sqrt(std::fabs(lam));
        eps(n) = lam > 0 ? 1.0 : -1.0;
    }
    if (opts.frame_mix) E = E * (*opts.frame_mix);
    Eigen::Matrix4d forms = g * E; // column a = g(E_a, .)

    auto block = [&](const Mat6& P, const Mat6& Wx) {
        Eigen::Matrix3d M;
        std::array<Vec6, 3> u;
        for (int A = 0; A < 3; ++A) u[A] = P * wedge(forms.col(0), forms.col(A + 1));
        for (int A = 0; A < 3; ++A) {
            const double nn = u[A].dot(ops.gram * u[A]);
            if (std::fabs(nn) < 1e-14) throw DegenerateError("null basis bivector in eigenspace");
            for (int B = 0; B < 3; ++B) M(A, B) = u[A].dot(ops.gram * (Wx * u[B])) / nn;
        }
        return M;
    };
    r.m_plus = block(Pp, ops.weyl);
    r.m_minus = block(Pm, ops.weyl);
    r.max_plus = max_abs3(r.m_plus);
    r.max_minus = max_abs3(r.m_minus);
    r.minus_squared = max_abs3(r.m_minus * r.m_minus);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(r.m_minus);
    const auto sv = svd.singularValues();
    for (int n = 0; n < 3; ++n)
        if (sv(n) > opts.tol * (1.0 + sv(0))) ++r.minus_rank;

    r.self_dual = r.max_minus <= opts.tol;
    r.anti_self_dual = r.max_plus <= opts.tol;
    r.minus_nilpotent = !r.self_dual && r.minus_squared <= opts.tol;
    return r;
}

DualityReport weyl_split(const WalkerMetric& g, const Point4& p, const DualityOptions& opts) {
    Curvature c(metric_jet(g, p, 2));
    return weyl_split(c, opts);
}

AsdReport asd_obstruction(const AffineSurface& s, const EndoField& t, const SymForm2& phi,
                          const Sampler& sampler, double tol) {
    std::string off;
    if (!in_normal_form_chart(s, &off))
        throw NormalFormError(off, "chart not in normal form: " + off + " must vanish");
    if (!t.literally_canonical_nilpotent())
        throw NormalFormError("T", "chart not in normal form: T must satisfy T d1 = d2, T d2 = 0");

    const WalkerMetric g = build_metric(s, &phi, &t);
    AsdReport r;
    bool first = true;
    bool all_asd_eq = true, all_asd_w = true;
    r.verdicts_agree = true;
    for (const auto& q : sampler.points()) {
        const Point4 b{q[0], q[1], 0.0, 0.0};
        const auto G = s.jets({q[0], q[1]}, 1);
        auto gam = [&](int i, int j, int k) -> const Jet& { return G[i * 4 + j * 2 + k]; };
        std::array<std::array<Jet, 2>, 2> P;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) P[i][j] = phi(i, j).jet(b, 2);
        const auto rj = affine_ricci_jets(s, {q[0], q[1]}, 2);

        // (nabla Phi)_abc, derivative slot last, as order-1 jets
        Jet NP[2][2][2];
        for (int a = 0; a < 2; ++a)
            for (int bb = 0; bb < 2; ++bb)
                for (int c = 0; c < 2; ++c) {
                    Jet acc = P[a][bb].derivative(c);
                    for (int m = 0; m < 2; ++m) {
                        fma_into(acc, gam(c, a, m), P[m][bb], -1.0);
                        fma_into(acc, gam(c, bb, m), P[a][m], -1.0);
                    }
                    NP[a][bb][c] = acc;
                }
        // (nabla nabla Phi)(a, b; c, v) = (nabla_v nabla Phi)_abc
        auto N2 = [&](int a, int bb, int c, int v) {
            double val = NP[a][bb][c].d(v);
            for (int m = 0; m < 2; ++m) {
                val -= gam(v, a, m).value() * NP[m][bb][c].value();
                val -= gam(v, bb, m).value() * NP[a][m][c].value();
                val -= gam(v, c, m).value() * NP[a][bb][m].value();
            }
            return val;
        };
        // T maps d1 -> d2 and d2 -> 0, so hats only see index 1 -> 2
        const int tmap[2] = {1, -1};
        const double rho11 = rj.rho[0][0].value();
        double first_res = 0.0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 2; ++z) {
                    double hat = 0.0;
                    if (tmap[x] >= 0 && tmap[y] >= 0 && tmap[z] >= 0)
                        hat = NP[tmap[x]][tmap[y]][tmap[z]].value();
                    // omega-hat(X) rho(Y, Z); omega = d log rho_11, so omega_k rho_11 = d_k rho_11
                    double orho = 0.0;
                    if (tmap[x] >= 0 && y == 0 && z == 0) orho = rj.rho[0][0].d(tmap[x]);
                    first_res = std::max(first_res, std::fabs(hat + 2.0 * orho));
                }
        const double phihat = P[1][1].value();
        const double scalar = 0.5 * phihat * phihat + 2.0 * phihat * rho11 + N2(0, 0, 1, 1) + N2(1, 1, 0, 0) -
                              2.0 * N2(0, 1, 1, 0);
        if (first) {
            r.scalar_min = r.scalar_max = scalar;
            first = false;
        }
        r.scalar_min = std::min(r.scalar_min, scalar);
        r.scalar_max = std::max(r.scalar_max, scalar);
        if (!r.worst_point || std::max(first_res, std::fabs(scalar)) >
                                  std::max(r.first_residual, r.scalar_residual))
            r.worst_point = q;
        r.first_residual = std::max(r.first_residual, first_res);
        r.scalar_residual = std::max(r.scalar_residual, std::fabs(scalar));

        const bool asd_eq = first_res <= tol && std::fabs(scalar) <= tol;
        const DualityReport d = weyl_split(g, q, DualityOptions{Orientation::Auto, tol, std::nullopt});
        r.max_wplus = std::max(r.max_wplus, d.max_plus);
        if (asd_eq != d.anti_self_dual) r.verdicts_agree = false;
        all_asd_eq = all_asd_eq && asd_eq;
        all_asd_w = all_asd_w && d.anti_self_dual;
        ++r.samples;
    }
    r.asd_by_equations = all_asd_eq;
    r.asd_by_weyl = all_asd_w;
    return r;
}

ClosedFormWplus closed_form_wplus_crosscheck(const WalkerMetric& g, const Point4& p) {
    ClosedFormWplus out;
    out.point = p;
    const Jet A = g.a.jet(p, 2), B = g.b.jet(p, 2), C = g.c.jet(p, 2);
    const double a = A.value(), b = B.value(), c = C.value();
    // first and second partials, coordinates (x1, x2, xp1, xp2) -> 0..3
    auto a1 = [&](int i) { return A.d(i); };
    auto b1 = [&](int i) { return B.d(i); };
    auto c1 = [&](int i) { return C.d(i); };
    auto a2 = [&](int i, int j) { return A.d(i, j); };
    auto b2 = [&](int i, int j) { return B.d(i, j); };
    auto c2 = [&](int i, int j) { return C.d(i, j); };

    Curvature curv(metric_jet(g, p, 2));
    out.tau = curv.scalar().value();

    out.w11 = (6 * c * a1(0) * b1(1) - 6 * a1(0) * b1(2) - 6 * b * a1(0) * c1(1) + 12 * a1(0) * c1(3) -
               6 * c * a1(1) * b1(0) + 6 * a1(1) * b1(3) + 6 * b * a1(1) * c1(0) + 6 * a1(2) * b1(0) -
               6 * a1(3) * b1(1) - 12 * a1(3) * c1(0) + 6 * a * b1(0) * c1(1) - 6 * a * b1(1) * c1(0) +
               12 * b1(1) * c1(2) - 12 * b1(2) * c1(1) - a2(0, 0) - 12 * c * c * a2(0, 0) -
               12 * b * c * a2(0, 1) + 24 * c * a2(0, 3) - 3 * b * b * a2(1, 1) + 12 * b * a2(1, 3) -
               12 * a2(3, 3) - 3 * a * a * b2(0, 0) + 12 * a * b2(0, 2) - b2(1, 1) - 12 * b2(2, 2) +
               12 * a * c * c2(0, 0) - 2 * c2(0, 1) + 6 * a * b * c2(0, 1) - 24 * c * c2(0, 2) -
               12 * a * c2(0, 3) - 12 * b * c2(1, 2) + 24 * c2(2, 3)) /
              12.0;
    out.w12 = (-2 * c * a2(0, 0) - b * a2(0, 1) + 2 * a2(0, 3) + a * b2(0, 1) - 2 * b2(1, 2) + a * c2(0, 0) -
               2 * c * c2(0, 1) - 2 * c2(0, 2) - b * c2(1, 1) + 2 * c2(1, 3)) /
              4.0;
    const double w11 = out.w11, w12 = out.w12, t = out.tau;
    out.m << w11, w12, w11 + t / 12, -w12, t / 6, -w12, -w11 - t / 12, -w12, -w11 - t / 6;
    const Eigen::Matrix3d m2 = out.m * out.m;
    out.closed = {out.m.trace(), m2.trace(), (m2 * out.m).trace()};
    out.trace = out.m.trace();
    const DualityReport d = weyl_split(curv);
    out.pipeline = d.plus;
    out.deviation = std::max(std::fabs(std::fabs(out.closed.tr2) - std::fabs(out.pipeline.tr2)),
                             std::fabs(std::fabs(out.closed.tr3) - std::fabs(out.pipeline.tr3)));
    return out;
}

} // namespace walkerlab
