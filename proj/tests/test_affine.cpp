#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "walkerlab/affine.hpp"
#include "walkerlab/errors.hpp"

using namespace walkerlab;

TEST(AffineSurface, SymmetricStorage) {
    AffineSurface s;
    s.set_gamma("121", parse("x1"));
    EXPECT_TRUE(s.gamma(0, 1, 0) == s.gamma(1, 0, 0));
    EXPECT_TRUE(s.literal_zero(0, 0, 0));
    EXPECT_THROW(s.set_gamma("13", parse("1")), ScenarioError);
    EXPECT_THROW(s.set_gamma("131", parse("1")), ScenarioError);
    EXPECT_THROW(s.set_gamma("111", parse("xp1")), ScenarioError);
}

TEST(AffineCurvature, NormalFormRicci) {
    // only Gamma_11^2 = G: rho = [[d2 G, 0], [0, 0]]
    AffineSurface s;
    s.set_gamma(0, 0, 1, parse("x2^2*x1"));
    const AffineCurvature c = affine_curvature(s, {0.5, 0.4});
    EXPECT_NEAR(c.rho[0][0], 2 * 0.4 * 0.5, 1e-15);
    EXPECT_NEAR(c.rho[0][1], 0.0, 1e-15);
    EXPECT_NEAR(c.rho[1][0], 0.0, 1e-15);
    EXPECT_NEAR(c.rho[1][1], 0.0, 1e-15);
    EXPECT_EQ(c.rho_sym_rank, 1);
    EXPECT_TRUE(in_normal_form_chart(s));
}

TEST(AffineCurvature, SkewPartOfSkewBase) {
    // Gamma_11^1 = Gamma_12^2 = x2: rho_sk is non-zero
    AffineSurface s;
    s.set_gamma(0, 0, 0, parse("x2"));
    s.set_gamma(0, 1, 1, parse("x2"));
    const AffineCurvature c = affine_curvature(s, {0.2, 0.3});
    EXPECT_GT(std::fabs(c.rho_sk[0][1]), 0.1);
    EXPECT_NEAR(c.rho_sk[0][1], -c.rho_sk[1][0], 1e-15);
    std::string bad;
    EXPECT_FALSE(in_normal_form_chart(s, &bad));
    EXPECT_FALSE(bad.empty());
}

TEST(AffineCurvature, SymbolicMatchesJets) {
    UniformStream rng(3);
    for (int n = 0; n < 10; ++n) {
        AffineSurface s;
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j)
                for (int k = 0; k < 2; ++k) s.set_gamma(i, j, k, parse(testkit::random_poly(rng, 2, false, 3)));
        const Point2 p{rng.next(-1, 1), rng.next(-1, 1)};
        const auto sym = affine_ricci_expr(s);
        const AffineCurvature c = affine_curvature(s, p);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) EXPECT_NEAR(sym[i][j].eval({p[0], p[1], 0, 0}), c.rho[i][j], 1e-12);
    }
}

TEST(Parallel, CanonicalNilpotentOnFlatBase) {
    const AffineSurface flat;
    const ParallelReport r = parallel_nilpotent_check(flat, EndoField::canonical_nilpotent(), testkit::small_sampler(1, 8));
    EXPECT_LE(r.nabla_t_system, 1e-12);
    EXPECT_LE(r.nilpotency, 0.0);
    EXPECT_EQ(r.kernel, ParallelReport::Kernel::Line);
    EXPECT_GT(r.t_norm, 0.5);
}

TEST(Parallel, NotParallelWhenGamma122Set) {
    // T d1 = d2 parallel needs Gamma_12^2 = Gamma_11^1; break it
    AffineSurface s;
    s.set_gamma(0, 1, 1, parse("x1"));
    const ParallelReport r = parallel_nilpotent_check(s, EndoField::canonical_nilpotent(), testkit::small_sampler(2, 8));
    EXPECT_GT(r.nabla_t_system, 1e-3);
}

TEST(Parallel, RandomCanonicalCasesAreParallel) {
    UniformStream rng(44);
    for (int n = 0; n < 10; ++n) {
        const auto c = testkit::random_nilpotent(rng);
        const ParallelReport r = parallel_nilpotent_check(c.surface, c.t, testkit::small_sampler(n, 6));
        EXPECT_LE(r.nabla_t_system, 1e-12);
        EXPECT_LE(r.nabla_t_tensor, 1e-12);
    }
}

TEST(AffineSoliton, NormalFormExample) {
    // Gamma_11^2 = x2 with h = -x1^2: Hes h + 2 rho_sym = -2 + 2 = 0
    AffineSurface s;
    s.set_gamma(0, 0, 1, parse("x2"));
    const EndoField t = EndoField::canonical_nilpotent();
    const AgrsReport r = agrs_residual(s, parse("-x1^2"), &t, testkit::small_sampler(3, 10));
    EXPECT_LE(r.residual, 1e-12);
    ASSERT_TRUE(r.dh_kernel.has_value());
    EXPECT_LE(*r.dh_kernel, 1e-12);
    const AgrsReport bad = agrs_residual(s, parse("x1^2"), &t, testkit::small_sampler(3, 10));
    EXPECT_NEAR(bad.residual, 4.0, 1e-12);
}

TEST(AffineSoliton, HessianSymbolicMatchesDefinition) {
    AffineSurface s;
    s.set_gamma(0, 0, 0, parse("x2"));
    s.set_gamma(0, 1, 1, parse("x2"));
    const auto H = affine_hessian_expr(s, parse("x1^2"));
    const Point4 p{0.4, 0.3, 0, 0};
    // d1d1 h - Gamma_11^1 d1 h = 2 - x2 * 2 x1
    EXPECT_NEAR(H[0][0].eval(p), 2 - 0.3 * 0.8, 1e-15);
    // d1d2 h - Gamma_12^1 d1 h - Gamma_12^2 d2 h = 0
    EXPECT_NEAR(H[0][1].eval(p), 0.0, 1e-15);
}

TEST(EndoField, Helpers) {
    EXPECT_TRUE(EndoField::canonical_nilpotent().literally_canonical_nilpotent());
    EXPECT_FALSE(EndoField::scaled_identity(parse("1")).literally_canonical_nilpotent());
    const Mat2 m = EndoField::constant({{{2, 0}, {0, 1}}}).at({0, 0});
    EXPECT_EQ(m[0][0], 2.0);
    EXPECT_EQ(m[1][1], 1.0);
    EXPECT_TRUE(EndoField::zero().literally_zero());
}

TEST(BaseFields, FibreCoordinatesRejected) {
    EXPECT_NO_THROW(require_base_field(parse("x1*x2"), "Phi"));
    EXPECT_THROW(require_base_field(parse("x1*xp2"), "Phi"), ScenarioError);
}
