#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "walkerlab/affine.hpp"
#include "walkerlab/curvature.hpp"
#include "walkerlab/sampler.hpp"
#include "walkerlab/walker_metric.hpp"

namespace walkerlab {

enum class Orientation { Auto, Plus, Minus };

struct DualityOptions {
    Orientation orientation = Orientation::Auto;
    double tol = 1e-8;
    /// Optional O(2,2) mixing of the pseudo-orthonormal frame (columns = new frame
    /// in terms of the old one). Used to check basis independence.
    std::optional<Eigen::Matrix4d> frame_mix;
};

struct SpectralInvariants {
    double tr = 0.0, tr2 = 0.0, tr3 = 0.0;
};

/// Operators on 2-forms in the coordinate basis
/// {dx1^dx2, dx1^dxp1, dx1^dxp2, dx2^dxp1, dx2^dxp2, dxp1^dxp2}.
struct BivectorOperators {
    Eigen::Matrix<double, 6, 6> gram;  // induced inner product
    Eigen::Matrix<double, 6, 6> star;
    Eigen::Matrix<double, 6, 6> weyl;  // <W(X^Y), Z^V> = W(X, Y, V, Z)
    int orientation_sign = 1;
};

struct DualityReport {
    Point4 point{};
    int orientation_sign = 1;
    SpectralInvariants plus, minus;
    Eigen::Matrix3d m_plus = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d m_minus = Eigen::Matrix3d::Zero();
    double max_plus = 0.0;      // max |W+ entry| in the pseudo-orthonormal eigenbasis
    double max_minus = 0.0;
    double minus_squared = 0.0; // max |(W-)^2 entry|
    int minus_rank = 0;
    double star_square_residual = 0.0;
    double reconstruction = 0.0;
    double self_adjoint_residual = 0.0;
    bool self_dual = false;
    bool anti_self_dual = false;
    bool minus_nilpotent = false;
};

BivectorOperators bivector_operators(Curvature& c, Orientation o = Orientation::Auto);

DualityReport weyl_split(Curvature& c, const DualityOptions& opts = {});
DualityReport weyl_split(const WalkerMetric& g, const Point4& p, const DualityOptions& opts = {});

/// Random element of O(2,2) for the frame signature eps (entries +-1), seeded.
Eigen::Matrix4d random_frame_mix(std::uint64_t seed, const Eigen::Vector4d& eps, double spread = 0.5);

struct AsdReport {
    double first_residual = 0.0;   // max |nabla-hat Phi + 2 omega-hat (x) rho|
    double scalar_min = 0.0;       // range of the scalar equation's value
    double scalar_max = 0.0;
    double scalar_residual = 0.0;  // max |scalar|
    std::optional<Point4> worst_point;
    bool asd_by_equations = false;
    bool asd_by_weyl = false;
    double max_wplus = 0.0;
    bool verdicts_agree = false;
    int samples = 0;
};

/// Requires the chart to have only Gamma_11^2 non-zero and T d1 = d2, T d2 = 0.
AsdReport asd_obstruction(const AffineSurface& s, const EndoField& t, const SymForm2& phi,
                          const Sampler& sampler, double tol = 1e-8);

struct ClosedFormWplus {
    Point4 point{};
    double w11 = 0.0, w12 = 0.0, tau = 0.0;
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    SpectralInvariants closed, pipeline;
    double deviation = 0.0; // max over ||tr M^k| - |tr W+^k||, k = 2, 3
    double trace = 0.0;     // tr M
};

/// Evaluate the closed-form self-dual Weyl entries of a general Walker metric and
/// compare basis-independent invariants with the pipeline.
ClosedFormWplus closed_form_wplus_crosscheck(const WalkerMetric& g, const Point4& p);

} // namespace walkerlab
