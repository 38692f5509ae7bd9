#pragma once

#include <optional>
#include <string>

#include "walkerlab/affine.hpp"
#include "walkerlab/curvature.hpp"
#include "walkerlab/sampler.hpp"
#include "walkerlab/walker_metric.hpp"

namespace walkerlab {

struct SolitonData {
    WalkerMetric metric;
    Expression f;                  // potential on the 4D chart
    std::optional<double> lambda;  // nullopt: infer
};

struct SolitonReport {
    double residual = 0.0;      // max |Hes_f + rho - lambda g|
    double lambda = 0.0;        // inferred (or given) value at the first sample
    double lambda_spread = 0.0; // max - min of the pointwise inferred lambda
    double grad_norm = 0.0;     // max |g(grad f, grad f)|
    double grad_size = 0.0;     // max |df| entry, to tell isotropic from trivial
    double trace_identity = 0.0; // max |Lap f + tau - 4 lambda|
    std::optional<Point4> worst_point;
    bool soliton = false;
    bool steady = false;
    bool isotropic = false;
    std::string verdict;
    int samples = 0;
};

/// lambda, when inferred, comes from the (d1, dxp1) component where g = 1.
SolitonReport soliton_residual(const SolitonData& d, const Sampler& sampler, double tol = 1e-9);

enum class FamilyMode { Soliton, Einstein };

struct BachFlatFamily {
    SymForm2 phi;
    WalkerMetric metric;
    SolitonData data;
};

/// Canonical chart only (T d1 = d2, T d2 = 0). Phi_22 is completed symbolically,
/// Phi_11 and Phi_12 are left as given.
BachFlatFamily build_bachflat_family(const AffineSurface& s, const EndoField& t, const Expression& h,
                                     const Expression& phi11, const Expression& phi12, FamilyMode mode,
                                     const Sampler& sampler, double tol = 1e-9);

/// C_ijk + weight W_ijkl grad^l u at a point (u a scalar jet of order >= 1).
/// With the Schouten tensor rho - tau/6 g, a factor e^(2 sigma) g that is Einstein
/// gives C + 2 W(., ., ., grad sigma) = 0.
TensorValue cotton_weyl_gradient(Curvature& c, const Jet& u, double weight = 1.0);

struct DTensorReport {
    double d_max = 0.0;        // max |D_ijk|
    double cotton_max = 0.0;   // harmonic-Weyl residual through the Cotton tensor
    std::optional<double> formula_residual;   // max |d2 Phi_22 + 2 d2 rho_sym_11|, canonical charts
    std::optional<double> closed_form_deviation;  // max |D_121 + 2 h'(x1) d2 Gamma_11^1|, f = h(x1)
    TensorValue worst;         // D at the worst sample
    std::optional<Point4> worst_point;
    bool d_zero = false;
    bool harmonic_weyl = false;
    int samples = 0;
};

DTensorReport dtensor_harmonicweyl(const SolitonData& d, const Sampler& sampler, double tol = 1e-9);

struct ConformalData {
    Expression phi;                // candidate factor; base function in the structured cases
    std::optional<double> kappa;   // structured case (ii): factor = kappa xp2 + phi
};

struct CeReport {
    double residual = 0.0;          // max |E|
    std::optional<Point4> witness;
    bool einstein_checked = false;
    double einstein_residual = 0.0; // max |rho_bar - tau_bar/4 g_bar|
    double lambda_bar = 0.0;        // tau_bar/4 at the first sample
    bool conformally_einstein = false;
    int samples = 0;
};

/// E = 2 Hes_phi + phi rho - 1/4 (2 Lap phi + phi tau) g
CeReport ce_residual(const Expression& phi, const WalkerMetric& g, const Sampler& sampler, double tol = 1e-9);

struct CeStructuredReport {
    int which = 1;                     // 1 or 2
    double residual = 0.0;             // max over the displayed base equations
    double first = 0.0, second = 0.0;  // split by equation (case 2); case 1: 11 and rest
    std::optional<double> dphi_kernel; // case 1: max |dphi(ker T)|
    double cotton_condition = 0.0;     // max |C + 2 W(., ., ., grad sigma)|, sigma = -log factor
    double bach = 0.0;
    std::optional<Point4> witness;
    bool holds = false;
    bool necessary_hold = false;
    int samples = 0;
    int skipped = 0;                   // non-positive 4D factor
};

CeStructuredReport ce_structured(const ConformalData& c, const AffineSurface& s, const EndoField& t,
                                 const SymForm2& phi, const Sampler& sampler, double tol = 1e-9);

} // namespace walkerlab
