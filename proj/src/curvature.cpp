#include "walkerlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "walkerlab/errors.hpp"

namespace walkerlab {

namespace {

constexpr int N = kDim;

JetTensor zeros(int up, int down, int order, const Point4& p) {
    JetTensor t(up, down, Jet(std::max(order, 0)));
    t.point = p;
    return t;
}

} // namespace

Curvature::Curvature(MetricJet m) : m_(std::move(m)) {}

void Curvature::need(int order, const char* what) const {
    if (m_.order < order) {
        std::ostringstream os;
        os << what << " needs metric jets of order " << order << ", have " << m_.order;
        throw OrderError(os.str());
    }
}

JetTensor Curvature::metric_tensor() const {
    JetTensor g = zeros(0, 2, m_.order, m_.point);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) g(i, j) = m_.g[i][j];
    return g;
}

const JetTensor& Curvature::christoffel() {
    if (gamma_) return *gamma_;
    need(1, "Christoffel symbols");
    const int K = m_.order - 1;
    std::array<std::array<std::array<Jet, N>, N>, N> dg; // dg[k][i][j] = d_k g_ij
    for (int k = 0; k < N; ++k)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) dg[k][i][j] = m_.g[i][j].derivative(k);
    JetTensor G = zeros(1, 2, K, m_.point);
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            std::array<Jet, N> lower; // Gamma_{ij k}
            for (int k = 0; k < N; ++k) lower[k] = (dg[i][j][k] + dg[j][i][k] - dg[k][i][j]) * 0.5;
            for (int l = 0; l < N; ++l) {
                Jet acc(K);
                for (int k = 0; k < N; ++k) fma_into(acc, m_.ginv[l][k], lower[k]);
                G(l, i, j) = acc;
                G(l, j, i) = acc;
            }
        }
    gamma_ = std::move(G);
    return *gamma_;
}

const JetTensor& Curvature::riemann_up() {
    if (rup_) return *rup_;
    need(2, "Riemann tensor");
    const JetTensor& G = christoffel();
    const int K = m_.order - 2;
    JetTensor R = zeros(1, 3, K, m_.point);
    for (int l = 0; l < N; ++l)
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                for (int k = 0; k < N; ++k) {
                    Jet acc = G(l, j, k).derivative(i) - G(l, i, k).derivative(j);
                    for (int m = 0; m < N; ++m) {
                        fma_into(acc, G(m, j, k), G(l, i, m));
                        fma_into(acc, G(m, i, k), G(l, j, m), -1.0);
                    }
                    R(l, i, j, k) = acc;
                    R(l, j, i, k) = -acc;
                }
    rup_ = std::move(R);
    return *rup_;
}

const JetTensor& Curvature::riemann() {
    if (riem_) return *riem_;
    const JetTensor& Ru = riemann_up();
    const int K = m_.order - 2;
    JetTensor R = zeros(0, 4, K, m_.point);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    Jet acc(K);
                    for (int m = 0; m < N; ++m) fma_into(acc, Ru(m, i, j, k), m_.g[m][l]);
                    R(i, j, k, l) = acc;
                }
    riem_ = std::move(R);
    return *riem_;
}

const JetTensor& Curvature::ricci() {
    if (ricci_) return *ricci_;
    const JetTensor& Ru = riemann_up();
    const int K = m_.order - 2;
    JetTensor r = zeros(0, 2, K, m_.point);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
            Jet acc(K);
            for (int i = 0; i < N; ++i) acc += Ru(i, i, j, k);
            r(j, k) = acc;
        }
    ricci_ = std::move(r);
    return *ricci_;
}

const Jet& Curvature::scalar() {
    if (scalar_) return *scalar_;
    const JetTensor& r = ricci();
    Jet acc(m_.order - 2);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) fma_into(acc, m_.ginv[j][k], r(j, k));
    scalar_ = acc;
    return *scalar_;
}

const JetTensor& Curvature::schouten() {
    if (schouten_) return *schouten_;
    const JetTensor& r = ricci();
    const Jet t6 = scalar() * (1.0 / 6.0);
    JetTensor S = zeros(0, 2, m_.order - 2, m_.point);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Jet acc = r(i, j);
            fma_into(acc, t6, m_.g[i][j], -1.0);
            S(i, j) = acc;
        }
    schouten_ = std::move(S);
    return *schouten_;
}

const JetTensor& Curvature::weyl() {
    if (weyl_) return *weyl_;
    const JetTensor& R = riemann();
    const JetTensor& S = schouten();
    const auto& g = m_.g;
    JetTensor W = zeros(0, 4, m_.order - 2, m_.point);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    Jet acc = R(i, j, k, l);
                    fma_into(acc, S(j, k), g[i][l], -0.5);
                    fma_into(acc, S(i, l), g[j][k], -0.5);
                    fma_into(acc, S(i, k), g[j][l], 0.5);
                    fma_into(acc, S(j, l), g[i][k], 0.5);
                    W(i, j, k, l) = acc;
                }
    weyl_ = std::move(W);
    return *weyl_;
}

JetTensor Curvature::covariant_derivative(const JetTensor& t) {
    if (t.up() != 0) throw std::invalid_argument("covariant_derivative expects a (0,s) tensor");
    const int s = t.down();
    const int q = t[0].order();
    if (q < 1) throw OrderError("covariant derivative: order budget exceeded (would need more than 4 metric derivatives)");
    const JetTensor& G = christoffel();
    JetTensor out = zeros(0, s + 1, q - 1, t.point);
    const std::size_t inner = t.size();
    std::array<int, 6> idx{};
    for (int m = 0; m < N; ++m) {
        for (std::size_t off = 0; off < inner; ++off) {
            // decode off into indices
            std::size_t rem = off;
            for (int a = s - 1; a >= 0; --a) {
                idx[a] = static_cast<int>(rem % N);
                rem /= N;
            }
            Jet acc = t[off].derivative(m);
            for (int a = 0; a < s; ++a) {
                // - Gamma^p_{m idx[a]} T_{... p ...}
                std::size_t stride = 1;
                for (int b = s - 1; b > a; --b) stride *= N;
                const std::size_t base = off - static_cast<std::size_t>(idx[a]) * stride;
                for (int p = 0; p < N; ++p) fma_into(acc, G(p, m, idx[a]), t[base + p * stride], -1.0);
            }
            out[static_cast<std::size_t>(m) * inner + off] = acc;
        }
    }
    return out;
}

JetTensor Curvature::covariant_derivative2(const JetTensor& t) {
    return covariant_derivative(covariant_derivative(t));
}

JetTensor Curvature::divergence_first(const JetTensor& t) {
    if (t.up() != 0 || t.down() < 1) throw std::invalid_argument("divergence_first expects (0,s), s >= 1");
    const JetTensor d = covariant_derivative(t); // (m, k, rest...)
    const int s = t.down();
    std::size_t rest = 1;
    for (int a = 1; a < s; ++a) rest *= N;
    JetTensor out = zeros(0, s - 1, d[0].order(), t.point);
    for (std::size_t r = 0; r < rest; ++r) {
        Jet acc(d[0].order());
        for (int m = 0; m < N; ++m)
            for (int k = 0; k < N; ++k)
                fma_into(acc, m_.ginv[k][m], d[(static_cast<std::size_t>(m) * N + k) * rest + r]);
        out[r] = acc;
    }
    return out;
}

const JetTensor& Curvature::cotton() {
    if (cotton_) return *cotton_;
    need(3, "Cotton tensor");
    const JetTensor dS = covariant_derivative(schouten()); // (i, j, k) = (nabla_i S)_jk
    JetTensor C = zeros(0, 3, m_.order - 3, m_.point);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) C(i, j, k) = dS(i, j, k) - dS(j, i, k);
    cotton_ = std::move(C);
    return *cotton_;
}

const JetTensor& Curvature::div4_weyl() {
    if (div4w_) return *div4w_;
    need(3, "divergence of the Weyl tensor");
    const JetTensor dW = covariant_derivative(weyl()); // (m, k, i, j, l)
    const int K = m_.order - 3;
    JetTensor D = zeros(0, 3, K, m_.point);
    for (int k = 0; k < N; ++k)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                Jet acc(K);
                for (int l = 0; l < N; ++l)
                    for (int m = 0; m < N; ++m) fma_into(acc, m_.ginv[l][m], dW(m, k, i, j, l));
                D(k, i, j) = acc;
            }
    div4w_ = std::move(D);
    return *div4w_;
}

JetTensor Curvature::raise_both(const JetTensor& t) {
    const int K = std::min(t[0].order(), m_.order);
    JetTensor mid = zeros(0, 2, K, t.point);
    for (int a = 0; a < N; ++a)
        for (int l = 0; l < N; ++l) {
            Jet acc(K);
            for (int b = 0; b < N; ++b) fma_into(acc, m_.ginv[l][b], t(a, b));
            mid(a, l) = acc; // T_a^l
        }
    JetTensor up = zeros(2, 0, K, t.point);
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
            Jet acc(K);
            for (int a = 0; a < N; ++a) fma_into(acc, m_.ginv[k][a], mid(a, l));
            up(k, l) = acc;
        }
    return up;
}

JetTensor Curvature::weyl_rho() {
    const JetTensor rup = raise_both(ricci());
    const JetTensor& W = weyl();
    const int K = m_.order - 2;
    JetTensor out = zeros(0, 2, K, m_.point);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Jet acc(K);
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) fma_into(acc, rup(k, l), W(k, i, j, l));
            out(i, j) = acc;
        }
    return out;
}

BachResult Curvature::bach(double consistency_tol) {
    need(4, "Bach tensor");
    BachResult r;
    const TensorValue ddw = values_of(divergence_first(div4_weyl()));
    const TensorValue dc = values_of(divergence_first(cotton()));
    const TensorValue wr = values_of(weyl_rho());
    r.div1_div4_weyl = ddw;
    r.div1_cotton = dc;
    r.weyl_rho = wr;
    r.bach = TensorValue(0, 2);
    r.via_cotton = TensorValue(0, 2);
    r.bach.point = r.via_cotton.point = m_.point;
    for (std::size_t n = 0; n < ddw.size(); ++n) {
        r.bach[n] = ddw[n] + 0.5 * wr[n];
        r.via_cotton[n] = 0.5 * (dc[n] + wr[n]);
        r.discrepancy = std::max(r.discrepancy, std::fabs(r.bach[n] - r.via_cotton[n]));
        r.scale = std::max({r.scale, std::fabs(ddw[n]), std::fabs(dc[n]), std::fabs(wr[n])});
    }
    if (r.discrepancy > consistency_tol * (1.0 + r.scale)) {
        std::ostringstream os;
        os.precision(17);
        os << "Bach tensor routes disagree by " << r.discrepancy << " (scale " << r.scale
           << "): curvature convention inconsistency";
        throw ConsistencyError(os.str());
    }
    return r;
}

CurvatureBundle Curvature::bundle() {
    CurvatureBundle b;
    b.gamma = values_of(christoffel());
    b.riemann = values_of(riemann());
    b.ricci = values_of(ricci());
    b.scalar = scalar().value();
    b.schouten = values_of(schouten());
    b.weyl = values_of(weyl());
    if (m_.order >= 3) {
        b.cotton = values_of(cotton());
    }
    return b;
}

TensorValue christoffel(const WalkerMetric& g, const Point4& p) {
    Curvature c(metric_jet(g, p, 1));
    return values_of(c.christoffel());
}

CurvatureBundle curvature_bundle(const WalkerMetric& g, const Point4& p) {
    Curvature c(metric_jet(g, p, 3));
    return c.bundle();
}

BachResult bach(const WalkerMetric& g, const Point4& p) {
    Curvature c(metric_jet(g, p, 4));
    return c.bach();
}

JetTensor hessian(Curvature& c, const Jet& f) {
    if (f.order() < 2) throw OrderError("Hessian needs a jet of order >= 2");
    const JetTensor& G = c.christoffel();
    const int K = std::min(f.order() - 2, c.order() - 1);
    JetTensor H = zeros(0, 2, K, c.metric().point);
    std::array<Jet, N> df;
    for (int k = 0; k < N; ++k) df[k] = f.derivative(k);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Jet acc = df[i].derivative(j).truncated(K);
            for (int k = 0; k < N; ++k) fma_into(acc, G(k, i, j), df[k], -1.0);
            H(i, j) = acc;
        }
    return H;
}

} // namespace walkerlab
