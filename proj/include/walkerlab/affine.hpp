#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "walkerlab/expr.hpp"
#include "walkerlab/sampler.hpp"
#include "walkerlab/types.hpp"

namespace walkerlab {

/// Torsion-free connection on a 2D chart (x1, x2): Christoffel symbols
/// Gamma_ij^k with indices 0-based, storage keeps i <= j.
class AffineSurface {
public:
    AffineSurface() = default; // flat

    /// i, j, k in {0, 1}; symmetric in (i, j)
    const Expression& gamma(int i, int j, int k) const { return g_[slot(i, j, k)]; }
    void set_gamma(int i, int j, int k, Expression e);

    /// key "ijk" with 1-based digits, e.g. "112" for Gamma_11^2
    void set_gamma(const std::string& key, Expression e);
    static std::string symbol_name(int i, int j, int k);

    /// true when the symbol is the literal 0
    bool literal_zero(int i, int j, int k) const { return gamma(i, j, k).is_zero(); }

    /// Gamma and derivatives as jets at (p1, p2, 0, 0), index (i, j, k)
    std::array<Jet, 8> jets(const Point2& p, int order) const;

private:
    std::array<Expression, 6> g_{};
    static int slot(int i, int j, int k);
};

/// (1,1)-tensor field: T d_i = t[i][j] d_j.
struct EndoField {
    std::array<std::array<Expression, 2>, 2> t{};

    static EndoField zero() { return {}; }
    static EndoField scaled_identity(Expression c);
    static EndoField canonical_nilpotent(); // T d1 = d2, T d2 = 0
    static EndoField constant(const Mat2& m);

    bool literally_canonical_nilpotent() const;
    bool literally_zero() const;
    Mat2 at(const Point2& p) const;
};

/// Symmetric (0,2) field on the base.
struct SymForm2 {
    Expression p11, p12, p22;

    const Expression& operator()(int i, int j) const {
        if (i == 0 && j == 0) return p11;
        if (i == 1 && j == 1) return p22;
        return p12;
    }
    Expression& at(int i, int j) {
        if (i == 0 && j == 0) return p11;
        if (i == 1 && j == 1) return p22;
        return p12;
    }
    bool literally_zero() const { return p11.is_zero() && p12.is_zero() && p22.is_zero(); }
};

/// Throws ScenarioError if e depends on a fiber coordinate.
void require_base_field(const Expression& e, const std::string& what);

/// Affine curvature quantities at a point, computed to a given jet order.
struct AffineCurvatureJets {
    std::array<std::array<Jet, 2>, 2> rho;     // rho_ij, order - 1
    std::array<std::array<Jet, 2>, 2> rho_sym; // symmetric part
};

AffineCurvatureJets affine_ricci_jets(const AffineSurface& s, const Point2& p, int order);

struct AffineCurvature {
    Point2 point{};
    Mat2 rho{}, rho_sym{}, rho_sk{};
    int rho_sym_rank = 0;
    std::optional<std::array<double, 2>> eta;
    std::string eta_reason;
    std::optional<std::array<double, 2>> omega;
    std::string omega_reason;
};

/// Only Gamma_11^2 may be non-zero (literally).
bool in_normal_form_chart(const AffineSurface& s, std::string* offending = nullptr);

AffineCurvature affine_curvature(const AffineSurface& s, const Point2& p, double tol = 1e-9);

/// (nabla rho_sym)_{k i j} = d_k rho_sym_ij - Gamma_ki^m rho_sym_mj - Gamma_kj^m rho_sym_im
std::array<std::array<std::array<double, 2>, 2>, 2> nabla_rho_sym(const AffineSurface& s, const Point2& p);

struct ParallelReport {
    double nabla_t_system = 0.0;   // max |six component equations|
    double nabla_t_tensor = 0.0;   // max |(nabla T)| including derivatives of T
    double nilpotency = 0.0;       // max |T^2|
    double t_norm = 0.0;           // max |T| (nonzero-T witness)
    std::optional<Point4> nonzero_witness;
    enum class Kernel { None, Line, All } kernel = Kernel::None;
    std::array<double, 2> kernel_direction{};
    std::optional<double> canonical_form;
    std::optional<double> kernel_geodesic;
    int samples = 0;
};

ParallelReport parallel_nilpotent_check(const AffineSurface& s, const EndoField& t, const Sampler& sampler);

struct AgrsReport {
    double residual = 0.0; // max |Hes_h + 2 rho_sym|
    std::optional<Point4> worst_point;
    std::array<double, 3> worst_components{}; // 11, 12, 22
    std::optional<double> dh_kernel;           // max |dh(ker T direction)|
    std::string note;
    int samples = 0;
};

AgrsReport agrs_residual(const AffineSurface& s, const Expression& h, const EndoField* t, const Sampler& sampler);

/// Symbolic affine Ricci tensor rho_ij (for builders).
std::array<std::array<Expression, 2>, 2> affine_ricci_expr(const AffineSurface& s);
/// Symbolic Hessian (Hes h)_ij = d_i d_j h - Gamma_ij^k d_k h.
std::array<std::array<Expression, 2>, 2> affine_hessian_expr(const AffineSurface& s, const Expression& h);

} // namespace walkerlab
