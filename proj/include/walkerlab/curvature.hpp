#pragma once

#include <optional>

#include "walkerlab/tensor.hpp"
#include "walkerlab/walker_metric.hpp"

namespace walkerlab {

/// Curvature values at one point.
struct CurvatureBundle {
    TensorValue gamma;    // (1,2): gamma(k, i, j) = Gamma^k_ij
    TensorValue riemann;  // (0,4)
    TensorValue ricci;    // (0,2)
    double scalar = 0.0;
    TensorValue schouten; // (0,2)
    TensorValue cotton;   // (0,3)
    TensorValue weyl;     // (0,4)
};

struct BachResult {
    TensorValue bach;        // div1 div4 W + 1/2 W[rho]
    TensorValue via_cotton;  // 1/2 (div1 C + W[rho])
    TensorValue div1_div4_weyl;
    TensorValue div1_cotton;
    TensorValue weyl_rho;
    double discrepancy = 0.0; // max |bach - via_cotton|
    double scale = 0.0;       // max magnitude of the summed terms
};

/// Jet-level curvature pipeline for a metric given as jets at a point.
///
/// Conventions (0-based indices, derivative index first):
///   Gamma^l_ij = 1/2 g^lk (d_i g_jk + d_j g_ik - d_k g_ij)
///   R^l_ijk    = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^m_jk Gamma^l_im - Gamma^m_ik Gamma^l_jm
///   R_ijkl     = R^m_ijk g_ml,  rho_jk = R^i_ijk,  tau = g^jk rho_jk
///   S          = rho - tau/6 g
///   W_ijkl     = R_ijkl - 1/2 (S_jk g_il + S_il g_jk - S_ik g_jl - S_jl g_ik)
///   C_ijk      = (nabla_i S)_jk - (nabla_j S)_ik
///   (div4 W)_kij = g^lm (nabla_m W)_kijl,  (div1 T)_ij = g^km (nabla_m T)_kij
///   W[rho]_ij  = rho^kl W_kijl
/// Each layer loses one jet order, so Bach needs metric jets of order 4.
class Curvature {
public:
    explicit Curvature(MetricJet m);

    const MetricJet& metric() const { return m_; }
    int order() const { return m_.order; }

    const JetTensor& christoffel();
    const JetTensor& riemann_up(); // (1,3) stored (l, i, j, k)
    const JetTensor& riemann();
    const JetTensor& ricci();
    const Jet& scalar();
    const JetTensor& schouten();
    const JetTensor& weyl();
    const JetTensor& cotton();
    const JetTensor& div4_weyl();

    /// (0,s) -> (0,s+1); the new index comes first.
    JetTensor covariant_derivative(const JetTensor& t);
    /// Two passes: (nabla nabla T)(m, n, ...) with m the outer derivative.
    JetTensor covariant_derivative2(const JetTensor& t);
    /// g^km (nabla_m T)_k... : (0,s) -> (0,s-1)
    JetTensor divergence_first(const JetTensor& t);
    /// T^{ab} from a (0,2) tensor
    JetTensor raise_both(const JetTensor& t);

    JetTensor metric_tensor() const;
    JetTensor weyl_rho();

    BachResult bach(double consistency_tol = 1e-8);
    CurvatureBundle bundle();

private:
    MetricJet m_;
    std::optional<JetTensor> gamma_, rup_, riem_, ricci_, schouten_, weyl_, cotton_, div4w_;
    std::optional<Jet> scalar_;

    void need(int order, const char* what) const;
};

/// Convenience wrappers at a point of a Walker metric.
TensorValue christoffel(const WalkerMetric& g, const Point4& p);
CurvatureBundle curvature_bundle(const WalkerMetric& g, const Point4& p);
BachResult bach(const WalkerMetric& g, const Point4& p);

/// Hessian of a scalar jet: (nabla d f)_ij = d_i d_j f - Gamma^k_ij d_k f (order - 2 jets).
JetTensor hessian(Curvature& c, const Jet& f);

} // namespace walkerlab
