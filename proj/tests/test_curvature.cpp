#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "walkerlab/curvature.hpp"
#include "walkerlab/errors.hpp"

using namespace walkerlab;
using testkit::Json;

namespace {

void expect_tensor(const TensorValue& got, const Json& want, double tol, const std::string& what) {
    ASSERT_EQ(got.size(), want.size()) << what;
    for (std::size_t i = 0; i < got.size(); ++i) {
        const double w = want[i].get<double>();
        EXPECT_NEAR(got[i], w, tol * (1.0 + std::fabs(w))) << what << " component " << i;
    }
}

class OracleCase : public ::testing::TestWithParam<int> {};

} // namespace

TEST_P(OracleCase, MatchesSympyPipeline) {
    const Json cases = testkit::load_oracle("curvature_values.json");
    const Json& c = cases.at(GetParam());
    const WalkerMetric g = testkit::metric(c["a"], c["b"], c["c"]);
    const Point4 p = testkit::point_of(c["point"]);
    const CurvatureBundle b = curvature_bundle(g, p);
    const std::string name = c["name"];
    expect_tensor(b.gamma, c["christoffel"], 1e-12, name + " christoffel");
    expect_tensor(b.riemann, c["riemann"], 1e-11, name + " riemann");
    expect_tensor(b.ricci, c["ricci"], 1e-11, name + " ricci");
    EXPECT_NEAR(b.scalar, c["scalar"].get<double>(), 1e-11) << name;
    expect_tensor(b.schouten, c["schouten"], 1e-11, name + " schouten");
    expect_tensor(b.cotton, c["cotton"], 1e-10, name + " cotton");
    expect_tensor(b.weyl, c["weyl"], 1e-11, name + " weyl");
    if (c.contains("bach")) expect_tensor(bach(g, p).bach, c["bach"], 1e-9, name + " bach");
}

INSTANTIATE_TEST_SUITE_P(FrozenValues, OracleCase, ::testing::Range(0, 4));

TEST(BachOracle, ConstantTExtensions) {
    const Json cases = testkit::load_oracle("bach_constant_t.json");
    for (const auto& c : cases) {
        Mat2 t{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) t[i][j] = c["T"][i][j].get<double>();
        const EndoField tf = EndoField::constant(t);
        const SymForm2 phi{parse(c["phi"][0][0].get<std::string>()), parse(c["phi"][0][1].get<std::string>()),
                           parse(c["phi"][1][1].get<std::string>())};
        const WalkerMetric g = build_metric(AffineSurface{}, &phi, &tf);
        const Point4 p = testkit::point_of(c["point"]);
        const BachResult b = bach(g, p);
        expect_tensor(b.bach, c["bach"], 1e-9, c["T"].dump() + " " + c["phi"].dump());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                EXPECT_NEAR(b.bach(i, j), c["closed_base"][i][j].get<double>(), 1e-9);
                EXPECT_NEAR(b.bach(i, j + 2), c["closed_mixed"][i][j].get<double>(), 1e-9);
            }
    }
}

TEST(Bach, FlatExtensionIsZero) {
    const WalkerMetric g = build_metric(AffineSurface{}, nullptr, nullptr);
    EXPECT_EQ(max_abs(bach(g, {0.1, 0.2, 0.3, 0.4}).bach), 0.0);
}

TEST(Curvature, OrderGuard) {
    Curvature c(metric_jet(testkit::metric("xp1^2", "x1", "0"), {0, 0, 0, 0}, 2));
    EXPECT_NO_THROW(c.ricci());
    EXPECT_THROW(c.cotton(), OrderError);
}

// Symmetries of the curvature tensors on random Walker metrics.
class Symmetries : public ::testing::Test {
protected:
    void SetUp() override {
        UniformStream rng(2024);
        for (int n = 0; n < 10; ++n) cases.push_back({testkit::random_walker(rng), testkit::random_point(rng)});
    }
    std::vector<std::pair<WalkerMetric, Point4>> cases;
};

TEST_F(Symmetries, Riemann) {
    for (const auto& [g, p] : cases) {
        const CurvatureBundle b = curvature_bundle(g, p);
        const double s = 1e-11 * (1 + max_abs(b.riemann));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l) {
                        const double r = b.riemann(i, j, k, l);
                        EXPECT_NEAR(r, -b.riemann(j, i, k, l), s);
                        EXPECT_NEAR(r, -b.riemann(i, j, l, k), s);
                        EXPECT_NEAR(r, b.riemann(k, l, i, j), s);
                        EXPECT_NEAR(r + b.riemann(j, k, i, l) + b.riemann(k, i, j, l), 0.0, s);
                    }
    }
}

TEST_F(Symmetries, WeylIsTraceFree) {
    for (const auto& [g, p] : cases) {
        const CurvatureBundle b = curvature_bundle(g, p);
        const MetricAt m = metric_at(g, p);
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                double tr = 0.0;
                for (int i = 0; i < 4; ++i)
                    for (int l = 0; l < 4; ++l) tr += m.ginv[i][l] * b.weyl(i, j, k, l);
                EXPECT_NEAR(tr, 0.0, 1e-10 * (1 + max_abs(b.weyl)));
            }
    }
}

TEST_F(Symmetries, RicciSymmetricAndScalarTrace) {
    for (const auto& [g, p] : cases) {
        const CurvatureBundle b = curvature_bundle(g, p);
        const MetricAt m = metric_at(g, p);
        double tau = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                EXPECT_NEAR(b.ricci(i, j), b.ricci(j, i), 1e-11);
                tau += m.ginv[i][j] * b.ricci(i, j);
            }
        EXPECT_NEAR(tau, b.scalar, 1e-10);
    }
}

TEST_F(Symmetries, CottonSkewAndCyclic) {
    for (const auto& [g, p] : cases) {
        const CurvatureBundle b = curvature_bundle(g, p);
        const double s = 1e-10 * (1 + max_abs(b.cotton));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k) {
                    EXPECT_NEAR(b.cotton(i, j, k), -b.cotton(j, i, k), s);
                    EXPECT_NEAR(b.cotton(i, j, k) + b.cotton(j, k, i) + b.cotton(k, i, j), 0.0, s);
                }
    }
}

TEST_F(Symmetries, BachSymmetricTraceFreeAndFormulasAgree) {
    for (const auto& [g, p] : cases) {
        const BachResult b = bach(g, p);
        const MetricAt m = metric_at(g, p);
        const double s = 1e-9 * (1 + b.scale);
        double tr = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                EXPECT_NEAR(b.bach(i, j), b.bach(j, i), s);
                tr += m.ginv[i][j] * b.bach(i, j);
            }
        EXPECT_NEAR(tr, 0.0, s);
        EXPECT_LE(b.discrepancy, s);
    }
}

// Nilpotent extensions: Phi_22 = -2 rho_sym_11 + f(x1) makes the Cotton tensor vanish.
TEST(Cotton, NilpotentExtensionHarmonicChoice) {
    UniformStream rng(77);
    for (int n = 0; n < 8; ++n) {
        auto c = testkit::random_nilpotent(rng);
        const auto rho = affine_ricci_expr(c.surface);
        c.phi.p22 = parse("-2") * rho[0][0] + parse("x1^3 - x1/2");
        const WalkerMetric g = build_metric(c.surface, &c.phi, &c.t);
        const Point4 p = testkit::random_point(rng);
        EXPECT_LE(max_abs(curvature_bundle(g, p).cotton), 1e-10);
    }
}

TEST(Hessian, FlatCoordinates) {
    const WalkerMetric g = build_metric(AffineSurface{}, nullptr, nullptr);
    const Point4 p{0.3, 0.1, 0, 0};
    Curvature c(metric_jet(g, p, 3));
    const JetTensor h = hessian(c, parse("x1^2*x2").jet(p, 3));
    EXPECT_NEAR(h(0, 0).value(), 2 * 0.1, 1e-15);
    EXPECT_NEAR(h(0, 1).value(), 2 * 0.3, 1e-15);
}
