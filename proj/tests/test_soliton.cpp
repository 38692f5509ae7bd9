#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "walkerlab/errors.hpp"
#include "walkerlab/soliton.hpp"

using namespace walkerlab;
using testkit::Json;

namespace {

const Point4 kPoint{0.4, 0.3, -0.6, 0.2};

AffineSurface skew_base() {
    AffineSurface s;
    s.set_gamma(0, 0, 0, parse("x2"));
    s.set_gamma(0, 1, 1, parse("x2"));
    return s;
}

AffineSurface normal_base() {
    AffineSurface s;
    s.set_gamma(0, 0, 1, parse("x2"));
    return s;
}

} // namespace

TEST(Builder, SkewBaseMatchesOracle) {
    const Json o = testkit::load_oracle("soliton_conformal.json")["skew"];
    const BachFlatFamily fam = build_bachflat_family(skew_base(), EndoField::canonical_nilpotent(), parse("x1^2"),
                                                     parse("0"), parse("0"), FamilyMode::Soliton,
                                                     testkit::small_sampler(1, 8));
    const Expression want = parse(o["phi22"].get<std::string>());
    const Sampler pts = testkit::small_sampler(2, 8);
    for (const auto& p : pts.points()) EXPECT_NEAR(fam.phi.p22.eval(p), want.eval(p), 1e-13);

    const SolitonReport r = soliton_residual(fam.data, pts);
    EXPECT_TRUE(r.soliton);
    EXPECT_NEAR(r.lambda, o["lambda"].get<double>(), 1e-12);
    EXPECT_LE(max_abs(bach(fam.metric, kPoint).bach), 1e-9);
}

TEST(Builder, RejectsKernelDependentPotential) {
    EXPECT_THROW(build_bachflat_family(AffineSurface{}, EndoField::canonical_nilpotent(), parse("x2"), parse("0"),
                                       parse("0"), FamilyMode::Soliton, testkit::small_sampler(1, 4)),
                 RejectedError);
}

TEST(Builder, EinsteinModeIsRicciFlatOnNormalBase) {
    const Json o = testkit::load_oracle("soliton_conformal.json")["normal-einstein"];
    const BachFlatFamily fam = build_bachflat_family(normal_base(), EndoField::canonical_nilpotent(), parse("-x1^2"),
                                                     parse("0"), parse("0"), FamilyMode::Einstein,
                                                     testkit::small_sampler(3, 6));
    const CurvatureBundle b = curvature_bundle(fam.metric, kPoint);
    for (std::size_t i = 0; i < b.ricci.size(); ++i) EXPECT_NEAR(b.ricci[i], o["ricci"][i].get<double>(), 1e-12);
    EXPECT_NEAR(b.scalar, o["scalar"].get<double>(), 1e-12);
}

TEST(SolitonResidual, NormalFormSteady) {
    const Json o = testkit::load_oracle("soliton_conformal.json")["normal-soliton"];
    const WalkerMetric g = build_metric(normal_base(), nullptr, nullptr);
    const EndoField t = EndoField::canonical_nilpotent();
    const WalkerMetric gt = build_metric(normal_base(), nullptr, &t);
    const CurvatureBundle b = curvature_bundle(gt, kPoint);
    for (std::size_t i = 0; i < b.ricci.size(); ++i) EXPECT_NEAR(b.ricci[i], o["ricci"][i].get<double>(), 1e-12);
    const SolitonReport r = soliton_residual({gt, parse("-x1^2"), std::nullopt}, testkit::small_sampler(4, 8));
    EXPECT_TRUE(r.soliton);
    EXPECT_TRUE(r.steady);
    EXPECT_TRUE(r.isotropic);
    EXPECT_LE(r.trace_identity, 1e-10);
    // the modified Riemannian extension without T is not a soliton for this potential
    const SolitonReport r0 = soliton_residual({g, parse("x1^2"), std::nullopt}, testkit::small_sampler(4, 8));
    EXPECT_FALSE(r0.soliton);
}

TEST(SolitonResidual, GivenLambdaIsUsed) {
    const EndoField t = EndoField::canonical_nilpotent();
    const SymForm2 phi{parse("0"), parse("0"), parse("-2")};
    const WalkerMetric g = build_metric(AffineSurface{}, &phi, &t);
    const SolitonReport ok = soliton_residual({g, parse("x1^2"), 0.0}, testkit::small_sampler(5, 8));
    EXPECT_TRUE(ok.soliton);
    const SolitonReport bad = soliton_residual({g, parse("x1^2"), 1.0}, testkit::small_sampler(5, 8));
    EXPECT_FALSE(bad.soliton);
    // worst component is lambda g_22 = -2
    EXPECT_NEAR(bad.residual, 2.0, 1e-12);
}

TEST(DTensor, SkewBaseMatchesOracle) {
    const Json o = testkit::load_oracle("soliton_conformal.json")["skew"];
    const BachFlatFamily fam = build_bachflat_family(skew_base(), EndoField::canonical_nilpotent(), parse("x1^2"),
                                                     parse("0"), parse("0"), FamilyMode::Soliton,
                                                     testkit::small_sampler(1, 8));
    const DTensorReport r = dtensor_harmonicweyl(fam.data, testkit::at_point(kPoint));
    ASSERT_EQ(r.worst.size(), o["d_tensor"].size());
    for (std::size_t i = 0; i < r.worst.size(); ++i) EXPECT_NEAR(r.worst[i], o["d_tensor"][i].get<double>(), 1e-10);
    EXPECT_FALSE(r.d_zero);
    EXPECT_NEAR(r.d_max, 1.6, 1e-10);
}

TEST(DTensor, NormalFormSolitonVanishes) {
    const BachFlatFamily fam = build_bachflat_family(normal_base(), EndoField::canonical_nilpotent(), parse("-x1^2"),
                                                     parse("0"), parse("0"), FamilyMode::Soliton,
                                                     testkit::small_sampler(1, 8));
    const DTensorReport r = dtensor_harmonicweyl(fam.data, testkit::small_sampler(6, 8));
    EXPECT_TRUE(r.d_zero);
    ASSERT_TRUE(r.formula_residual.has_value());
    EXPECT_LE(*r.formula_residual, 1e-10);
}

TEST(ConformalEinstein, MatchesOracleTensors) {
    const Json o = testkit::load_oracle("soliton_conformal.json");
    const BachFlatFamily fam = build_bachflat_family(skew_base(), EndoField::canonical_nilpotent(), parse("x1^2"),
                                                     parse("0"), parse("0"), FamilyMode::Soliton,
                                                     testkit::small_sampler(1, 8));
    for (const auto& [name, vals] : o["skew"]["ce"].items()) {
        double want = 0.0;
        for (const auto& v : vals) want = std::max(want, std::fabs(v.get<double>()));
        const CeReport r = ce_residual(parse(name), fam.metric, testkit::at_point(kPoint));
        EXPECT_NEAR(r.residual, want, 1e-10) << name;
        EXPECT_FALSE(r.conformally_einstein);
    }
    const EndoField t = EndoField::canonical_nilpotent();
    const SymForm2 phi{parse("0"), parse("0"), parse("-2")};
    const WalkerMetric flat = build_metric(AffineSurface{}, &phi, &t);
    const CeReport r = ce_residual(parse("cosh(x1)"), flat, testkit::small_sampler(7, 8));
    EXPECT_LE(r.residual, 1e-10);
    EXPECT_TRUE(r.conformally_einstein);
    EXPECT_LE(r.einstein_residual, 1e-8);
}

TEST(ConformalEinstein, StructuredCaseTwoSolution) {
    const SymForm2 phi{parse("0"), parse("x1*(x2 + 5)"), parse("2")};
    SamplerConfig cfg;
    cfg.seed = 8;
    cfg.count = 8;
    const CeStructuredReport r = ce_structured({parse("x2 + 5"), 1.0}, AffineSurface{},
                                               EndoField::canonical_nilpotent(), phi, Sampler(cfg));
    EXPECT_EQ(r.which, 2);
    EXPECT_TRUE(r.holds);
    EXPECT_LE(r.residual, 1e-10);
    EXPECT_LE(r.bach, 1e-8);
}

TEST(ConformalEinstein, StructuredCaseOneOnFlatSteady) {
    const SymForm2 phi{parse("0"), parse("0"), parse("-2")};
    const CeStructuredReport r = ce_structured({parse("cosh(x1)"), std::nullopt}, AffineSurface{},
                                               EndoField::canonical_nilpotent(), phi, testkit::small_sampler(9, 8));
    EXPECT_EQ(r.which, 1);
    EXPECT_TRUE(r.holds);
    ASSERT_TRUE(r.dphi_kernel.has_value());
    EXPECT_LE(*r.dphi_kernel, 1e-12);
}

TEST(CottonWeyl, EinsteinRescalingKillsIt) {
    // g_bar = cosh(x1)^-2 g is Einstein, so sigma = -log cosh(x1)
    const EndoField t = EndoField::canonical_nilpotent();
    const SymForm2 phi{parse("0"), parse("0"), parse("-2")};
    const WalkerMetric g = build_metric(AffineSurface{}, &phi, &t);
    Curvature c(metric_jet(g, kPoint, 3));
    const Jet sigma = -log(cosh(Jet::variable(0, kPoint[0], 3)));
    EXPECT_LE(max_abs(cotton_weyl_gradient(c, sigma, 2.0)), 1e-12);
}
