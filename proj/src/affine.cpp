#include "walkerlab/affine.hpp"

#include <algorithm>
#include <cmath>

#include "walkerlab/errors.hpp"

namespace walkerlab {

namespace {

Point4 lift(const Point2& p) { return {p[0], p[1], 0.0, 0.0}; }
Point2 base(const Point4& p) { return {p[0], p[1]}; }

double max_abs2(const Mat2& m) {
    return std::max({std::fabs(m[0][0]), std::fabs(m[0][1]), std::fabs(m[1][0]), std::fabs(m[1][1])});
}

// kernel of v -> v^i T_i^j; returns rank
int kernel_of(const Mat2& t, double tol, std::array<double, 2>& dir) {
    const double m = max_abs2(t);
    if (m <= tol) return 0;
    const double det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
    if (std::fabs(det) > tol * (1.0 + m * m)) return 2;
    // columns j of T: equations sum_i v^i t[i][j] = 0
    int j = (std::hypot(t[0][0], t[1][0]) >= std::hypot(t[0][1], t[1][1])) ? 0 : 1;
    double a = t[0][j], b = t[1][j];
    double n = std::hypot(a, b);
    dir = {-b / n, a / n};
    // sign convention: first nonzero component positive
    if (dir[0] < 0 || (dir[0] == 0 && dir[1] < 0)) dir = {-dir[0], -dir[1]};
    return 1;
}

} // namespace

int AffineSurface::slot(int i, int j, int k) {
    if (i < 0 || i > 1 || j < 0 || j > 1 || k < 0 || k > 1)
        throw std::out_of_range("affine index outside {0,1}");
    if (i > j) std::swap(i, j);
    const int pair = (i == 0 && j == 0) ? 0 : (i == 0) ? 1 : 2;
    return pair * 2 + k;
}

std::string AffineSurface::symbol_name(int i, int j, int k) {
    return "Gamma_" + std::to_string(i + 1) + std::to_string(j + 1) + "^" + std::to_string(k + 1);
}

void require_base_field(const Expression& e, const std::string& what) {
    if (e.depends_on(Coord::XP1) || e.depends_on(Coord::XP2))
        throw ScenarioError(what + " must be a function of (x1, x2) only");
}

void AffineSurface::set_gamma(int i, int j, int k, Expression e) {
    require_base_field(e, symbol_name(i, j, k));
    g_[slot(i, j, k)] = std::move(e);
}

void AffineSurface::set_gamma(const std::string& key, Expression e) {
    if (key.size() != 3) throw ScenarioError("Christoffel key '" + key + "' must have three digits");
    int idx[3];
    for (int n = 0; n < 3; ++n) {
        if (key[n] != '1' && key[n] != '2')
            throw ScenarioError("Christoffel key '" + key + "' must use digits 1 and 2");
        idx[n] = key[n] - '1';
    }
    set_gamma(idx[0], idx[1], idx[2], std::move(e));
}

std::array<Jet, 8> AffineSurface::jets(const Point2& p, int order) const {
    std::array<Jet, 8> out;
    const Point4 q = lift(p);
    std::array<Jet, 6> cache;
    for (int s = 0; s < 6; ++s) cache[s] = g_[s].jet(q, order);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) out[i * 4 + j * 2 + k] = cache[slot(i, j, k)];
    return out;
}

EndoField EndoField::scaled_identity(Expression c) {
    EndoField t;
    t.t[0][0] = c;
    t.t[1][1] = c;
    return t;
}

EndoField EndoField::canonical_nilpotent() {
    EndoField t;
    t.t[0][1] = Expression(1);
    return t;
}

EndoField EndoField::constant(const Mat2& m) {
    EndoField t;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double v = m[i][j];
            if (v == std::trunc(v) && std::fabs(v) < 1e15) {
                t.t[i][j] = Expression(static_cast<long long>(v));
            } else {
                t.t[i][j] = Expression::decimal(v);
            }
        }
    return t;
}

bool EndoField::literally_canonical_nilpotent() const {
    return t[0][0].is_zero() && t[0][1].is_constant(1.0) && t[1][0].is_zero() && t[1][1].is_zero();
}

bool EndoField::literally_zero() const {
    return t[0][0].is_zero() && t[0][1].is_zero() && t[1][0].is_zero() && t[1][1].is_zero();
}

Mat2 EndoField::at(const Point2& p) const {
    Mat2 m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[i][j] = t[i][j].eval(lift(p));
    return m;
}

AffineCurvatureJets affine_ricci_jets(const AffineSurface& s, const Point2& p, int order) {
    if (order < 1) throw OrderError("affine Ricci needs Christoffel jets of order >= 1");
    const auto G = s.jets(p, order);
    auto g = [&](int i, int j, int k) -> const Jet& { return G[i * 4 + j * 2 + k]; };
    AffineCurvatureJets out;
    // rho_jk = R^i_{ijk},  R^l_{ijk} = d_i G^l_jk - d_j G^l_ik + G^m_jk G^l_im - G^m_ik G^l_jm
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            Jet acc(order - 1);
            for (int i = 0; i < 2; ++i) {
                acc += g(j, k, i).derivative(i);
                acc -= g(i, k, i).derivative(j);
                for (int m = 0; m < 2; ++m) {
                    fma_into(acc, g(j, k, m), g(i, m, i));
                    fma_into(acc, g(i, k, m), g(j, m, i), -1.0);
                }
            }
            out.rho[j][k] = acc;
        }
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) out.rho_sym[j][k] = (out.rho[j][k] + out.rho[k][j]) * 0.5;
    return out;
}

bool in_normal_form_chart(const AffineSurface& s, std::string* offending) {
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                if (i == 0 && j == 0 && k == 1) continue;
                if (!s.literal_zero(i, j, k)) {
                    if (offending) *offending = AffineSurface::symbol_name(i, j, k);
                    return false;
                }
            }
    return true;
}

std::array<std::array<std::array<double, 2>, 2>, 2> nabla_rho_sym(const AffineSurface& s, const Point2& p) {
    const auto G = s.jets(p, 0);
    const auto rj = affine_ricci_jets(s, p, 2);
    std::array<std::array<std::array<double, 2>, 2>, 2> out{};
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double v = rj.rho_sym[i][j].d(k);
                for (int m = 0; m < 2; ++m) {
                    v -= G[k * 4 + i * 2 + m].value() * rj.rho_sym[m][j].value();
                    v -= G[k * 4 + j * 2 + m].value() * rj.rho_sym[i][m].value();
                }
                out[k][i][j] = v;
            }
    return out;
}

AffineCurvature affine_curvature(const AffineSurface& s, const Point2& p, double tol) {
    AffineCurvature out;
    out.point = p;
    const auto rj = affine_ricci_jets(s, p, 1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            out.rho[i][j] = rj.rho[i][j].value();
            out.rho_sym[i][j] = rj.rho_sym[i][j].value();
        }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.rho_sk[i][j] = out.rho[i][j] - out.rho_sym[i][j];

    const double m = max_abs2(out.rho_sym);
    const double det = out.rho_sym[0][0] * out.rho_sym[1][1] - out.rho_sym[0][1] * out.rho_sym[1][0];
    if (m <= tol) {
        out.rho_sym_rank = 0;
        out.eta_reason = "rank 0";
    } else if (std::fabs(det) > tol * (1.0 + m * m)) {
        out.rho_sym_rank = 2;
        out.eta_reason = "rank 2";
    } else {
        out.rho_sym_rank = 1;
        // eta_k = (nabla_k rho_sym)_ab / rho_sym_ab at the dominant entry (a, b)
        int a = 0, b = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (std::fabs(out.rho_sym[i][j]) > std::fabs(out.rho_sym[a][b])) {
                    a = i;
                    b = j;
                }
        const auto nr = nabla_rho_sym(s, p);
        out.eta = std::array<double, 2>{nr[0][a][b] / out.rho_sym[a][b], nr[1][a][b] / out.rho_sym[a][b]};
    }

    std::string off;
    if (!in_normal_form_chart(s, &off)) {
        out.omega_reason = "not in normal form (" + off + " non-zero)";
    } else if (s.literal_zero(0, 0, 1)) {
        out.omega_reason = "flat connection";
    } else {
        // omega = d log(d2 Gamma_11^2)
        const Jet g = s.gamma(0, 0, 1).jet(lift(p), 2);
        const double d2 = g.d(1);
        if (d2 == 0.0)
            throw SingularPointError("d2 Gamma_11^2",
                                     "recurrence one-form undefined: d2 Gamma_11^2 vanishes at the point");
        out.omega = std::array<double, 2>{g.d(0, 1) / d2, g.d(1, 1) / d2};
    }
    return out;
}

ParallelReport parallel_nilpotent_check(const AffineSurface& s, const EndoField& t, const Sampler& sampler) {
    ParallelReport r;
    const double tol = 1e-9;
    bool first = true;
    bool canonical = t.literally_canonical_nilpotent();
    if (canonical) r.canonical_form = 0.0;
    for (const auto& q : sampler.points()) {
        const Point2 p = base(q);
        const Point4 b = lift(p);
        const auto G = s.jets(p, 0);
        auto g = [&](int i, int j, int k) { return G[i * 4 + j * 2 + k].value(); };
        std::array<std::array<Jet, 2>, 2> tj;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) tj[i][j] = t.t[i][j].jet(b, 1);
        Mat2 T{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) T[i][j] = tj[i][j].value();
        // Tji = T^j_i = coefficient of d_j in T d_i
        const double T11 = T[0][0], T21 = T[0][1], T12 = T[1][0], T22 = T[1][1];
        const double eqs[6] = {
            T12 * g(0, 0, 1) - T21 * g(0, 1, 0),
            T12 * g(0, 1, 1) - T21 * g(1, 1, 0),
            T21 * g(0, 0, 0) + (T22 - T11) * g(0, 0, 1) - T21 * g(0, 1, 1),
            T12 * g(0, 0, 0) + (T22 - T11) * g(0, 1, 0) - T12 * g(0, 1, 1),
            T21 * g(0, 1, 0) + (T22 - T11) * g(0, 1, 1) - T21 * g(1, 1, 1),
            T12 * g(0, 1, 0) + (T22 - T11) * g(1, 1, 0) - T12 * g(1, 1, 1),
        };
        for (double e : eqs) r.nabla_t_system = std::max(r.nabla_t_system, std::fabs(e));
        // (nabla_k T)_i^j = d_k T_i^j - Gamma_ki^m T_m^j + Gamma_km^j T_i^m
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double v = tj[i][j].d(k);
                    for (int m = 0; m < 2; ++m) v += -g(k, i, m) * T[m][j] + g(k, m, j) * T[i][m];
                    r.nabla_t_tensor = std::max(r.nabla_t_tensor, std::fabs(v));
                }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                // (T^2) d_i = T(T d_i) = T_i^m T_m^j d_j
                double sq = T[i][0] * T[0][j] + T[i][1] * T[1][j];
                r.nilpotency = std::max(r.nilpotency, std::fabs(sq));
            }
        const double tn = max_abs2(T);
        if (tn > r.t_norm) {
            r.t_norm = tn;
            r.nonzero_witness = q;
        }
        std::array<double, 2> dir{};
        const int rank = kernel_of(T, tol, dir);
        if (first) {
            r.kernel = rank == 0 ? ParallelReport::Kernel::All
                     : rank == 1 ? ParallelReport::Kernel::Line
                                 : ParallelReport::Kernel::None;
            r.kernel_direction = dir;
            first = false;
        }
        if (canonical) {
            const double dev[4] = {g(0, 1, 0), g(0, 1, 1) - g(0, 0, 0), g(1, 1, 0), g(1, 1, 1)};
            for (double d : dev) *r.canonical_form = std::max(*r.canonical_form, std::fabs(d));
        }
        if (rank == 1) {
            // nabla_v v for the constant-coefficient field v = dir
            std::array<double, 2> w{};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k) w[k] += dir[i] * dir[j] * g(i, j, k);
            const double off = std::fabs(w[0] * dir[1] - w[1] * dir[0]);
            r.kernel_geodesic = std::max(r.kernel_geodesic.value_or(0.0), off);
        }
        ++r.samples;
    }
    if (r.kernel == ParallelReport::Kernel::All) r.nilpotency = 0.0;
    return r;
}

std::array<std::array<Expression, 2>, 2> affine_ricci_expr(const AffineSurface& s) {
    std::array<std::array<Expression, 2>, 2> rho;
    const Coord c[2] = {Coord::X1, Coord::X2};
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            Expression acc;
            for (int i = 0; i < 2; ++i) {
                acc = acc + differentiate(s.gamma(j, k, i), c[i]) - differentiate(s.gamma(i, k, i), c[j]);
                for (int m = 0; m < 2; ++m)
                    acc = acc + s.gamma(j, k, m) * s.gamma(i, m, i) - s.gamma(i, k, m) * s.gamma(j, m, i);
            }
            rho[j][k] = acc;
        }
    return rho;
}

std::array<std::array<Expression, 2>, 2> affine_hessian_expr(const AffineSurface& s, const Expression& h) {
    const Coord c[2] = {Coord::X1, Coord::X2};
    const Expression dh[2] = {differentiate(h, Coord::X1), differentiate(h, Coord::X2)};
    std::array<std::array<Expression, 2>, 2> H;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Expression e = differentiate(dh[i], c[j]);
            for (int k = 0; k < 2; ++k) e = e - s.gamma(i, j, k) * dh[k];
            H[i][j] = e;
        }
    return H;
}

AgrsReport agrs_residual(const AffineSurface& s, const Expression& h, const EndoField* t, const Sampler& sampler) {
    require_base_field(h, "potential h");
    AgrsReport r;
    if (t == nullptr) r.note = "no T given; kernel clause skipped";
    for (const auto& q : sampler.points()) {
        const Point2 p = base(q);
        const Point4 b = lift(p);
        const auto G = s.jets(p, 0);
        const Jet hj = h.jet(b, 2);
        const auto rj = affine_ricci_jets(s, p, 1);
        std::array<double, 3> comp{};
        int n = 0;
        double worst = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                double v = hj.d(i, j);
                for (int k = 0; k < 2; ++k) v -= G[i * 4 + j * 2 + k].value() * hj.d(k);
                v += 2.0 * rj.rho_sym[i][j].value();
                comp[n++] = v;
                worst = std::max(worst, std::fabs(v));
            }
        if (!r.worst_point || worst > r.residual) {
            r.residual = worst;
            r.worst_point = q;
            r.worst_components = comp;
        }
        if (t) {
            std::array<double, 2> dir{};
            const int rank = kernel_of(t->at(p), 1e-9, dir);
            if (rank == 1) {
                const double v = std::fabs(dir[0] * hj.d(0) + dir[1] * hj.d(1));
                r.dh_kernel = std::max(r.dh_kernel.value_or(0.0), v);
            } else if (r.note.empty()) {
                r.note = rank == 0 ? "T vanishes; kernel is all of the tangent space, clause skipped"
                                   : "T invertible; kernel absent, clause skipped";
            }
        }
        ++r.samples;
    }
    return r;
}

} // namespace walkerlab
