#pragma once

#include <array>
#include <optional>

#include "walkerlab/affine.hpp"
#include "walkerlab/expr.hpp"
#include "walkerlab/jet.hpp"
#include "walkerlab/types.hpp"

namespace walkerlab {

struct ExtensionData {
    AffineSurface surface;
    SymForm2 phi;
    EndoField t;
};

/// Walker metric on (x1, x2, xp1, xp2):
///   [[a, c, 1, 0],
///    [c, b, 0, 1],
///    [1, 0, 0, 0],
///    [0, 1, 0, 0]]
struct WalkerMetric {
    Expression a, b, c;
    std::optional<ExtensionData> extension; // set by build_metric

    const Expression& block(int i, int j) const {
        if (i == 0 && j == 0) return a;
        if (i == 1 && j == 1) return b;
        return c;
    }
};

/// g_ij = 1/2 xp_r xp_s (T_i^r T_j^s + T_j^r T_i^s) - 2 xp_k Gamma_ij^k + Phi_ij
WalkerMetric build_metric(const AffineSurface& s, const SymForm2* phi = nullptr, const EndoField* t = nullptr);

struct MetricAt {
    Mat4 g{};
    Mat4 ginv{};
};

MetricAt metric_at(const WalkerMetric& g, const Point4& p);

/// Metric and inverse as jets of a common order.
struct MetricJet {
    Point4 point{};
    int order = 0;
    std::array<std::array<Jet, 4>, 4> g;
    std::array<std::array<Jet, 4>, 4> ginv;
    double sqrt_abs_det = 1.0; // sqrt|det g| at the point
};

MetricJet metric_jet(const WalkerMetric& g, const Point4& p, int order);

/// g_bar = phi^-2 g, given phi as a jet at the same point.
MetricJet conformal_rescale(const MetricJet& m, const Jet& phi);

/// Inverse of a general symmetric metric jet by Gauss-Jordan on jets.
std::array<std::array<Jet, 4>, 4> invert_jet_matrix(const std::array<std::array<Jet, 4>, 4>& a);

using OneForm2 = std::array<Expression, 2>;

struct HatForms {
    std::array<std::array<Expression, 2>, 2> phi_hat;                         // Phi(TX, TY)
    OneForm2 form_hat;                                                        // eta(TX) or omega(TX)
    std::array<std::array<std::array<Expression, 2>, 2>, 2> nabla_phi_hat;    // nabla Phi(TX, TY; TZ)
};

/// (nabla Phi)(d_a, d_b; d_c) = d_c Phi_ab - Gamma_ca^m Phi_mb - Gamma_cb^m Phi_am
std::array<std::array<std::array<Expression, 2>, 2>, 2> nabla_phi_expr(const AffineSurface& s, const SymForm2& phi);

HatForms hat_forms(const AffineSurface& s, const EndoField& t, const SymForm2& phi, const OneForm2& form);

/// omega = d log(d2 Gamma_11^2) as symbolic fields.
OneForm2 recurrence_omega_expr(const AffineSurface& s);
/// eta = (d1 log rho_sym_11 - 2 Gamma_11^1) dx1 + d2 log rho_sym_11 dx2 (canonical chart).
OneForm2 recurrence_eta_expr(const AffineSurface& s);

} // namespace walkerlab
