#include "nument/nument.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace nument;

TEST(GaussianTrace, DiagonalAndZeroKernels) {
    CMatrix zero = CMatrix::Zero(3, 3);
    EXPECT_NEAR(std::abs(gaussian_trace(zero) - cplx(8.0, 0.0)), 0.0, 1e-13);
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0)   = -0.5;
    d(1, 1)   = cplx(0.3, 1.1);
    const cplx expected = (1.0 + std::exp(cplx(-0.5, 0.0))) * (1.0 + std::exp(cplx(0.3, 1.1)));
    EXPECT_NEAR(std::abs(gaussian_trace(d) - expected), 0.0, 1e-13);
}

TEST(GaussianTrace, MatchesManyBodyTraceForRandomKernels) {
    Rng                              rng(5);
    std::normal_distribution<double> g(0.0, 0.4);
    const int                        L     = 4;
    auto                             basis = build_basis(L, Statistics::fermion);
    for(int k = 0; k < 5; ++k) {
        CMatrix a(L, L), b(L, L);
        for(int i = 0; i < L; ++i)
            for(int j = 0; j < L; ++j) {
                a(i, j) = cplx(g(rng), g(rng));
                b(i, j) = cplx(g(rng), g(rng));
            }
        const CMatrix ea = quadratic_operator(*basis, a).exp();
        const CMatrix eb = quadratic_operator(*basis, b).exp();
        EXPECT_NEAR(std::abs(gaussian_trace(a) - ea.trace()), 0.0, 1e-10 * std::abs(ea.trace()));
        const cplx many = (ea * eb).trace();
        EXPECT_NEAR(std::abs(std::exp(log_gaussian_trace_of_product({a.exp(), b.exp()})) - many), 0.0, 1e-10 * std::abs(many));
        // The combined exponent reproduces the product as a single Gaussian.
        const CMatrix f = combine_exponents(a, b);
        EXPECT_LT(linalg::max_abs(CMatrix(quadratic_operator(*basis, f).exp() - ea * eb)), 1e-9);
    }
}

TEST(Quadrature, PeriodicGridIsExactForTrigonometricPolynomials) {
    const auto q = AlphaQuadrature::periodic(6);
    EXPECT_NEAR(q.weight_sum(), 1.0, 1e-15);
    // Mean of cos(n u) over one period vanishes for 0 < n < 6.
    for(int n = 1; n < 6; ++n) {
        double acc = 0.0;
        for(std::size_t k = 0; k < q.nodes.size(); ++k) acc += q.weights[k] * std::cos(n * q.nodes[k]);
        EXPECT_NEAR(acc, 0.0, 1e-14) << n;
    }
    const auto t = AlphaQuadrature::triangular_gauss<30>();
    EXPECT_NEAR(t.weight_sum(), 1.0, 1e-13);
    double acc = 0.0;
    for(std::size_t k = 0; k < t.nodes.size(); ++k) acc += t.weights[k] * std::exp(-0.2 * t.nodes[k] * t.nodes[k]);
    EXPECT_NEAR(acc, oracle::cft_integral(std::exp(0.2 * pi * pi)), 1e-12);
}

TEST(PurityRatio, LowRankIntegrandMatchesPropagatorForm) {
    const int          L = 8;
    const auto         kernel = SingleParticleKernel(tight_binding_kernel(L, 1.0), Bipartition::centered(L, 3));
    const ModeSpectrum ms     = mode_spectrum(kernel.h);
    for(double beta : {0.1, 1.0, 5.0}) {
        const RMatrix p      = ms.modes * (-beta * ms.energies).array().exp().matrix().asDiagonal() * ms.modes.transpose();
        const auto    blocks = thermal_blocks(ms, kernel.partition.a_sites(), beta);
        for(double alpha : {0.0, 0.4, 1.3, 2.9, pi}) {
            const cplx low    = ratio_integrand(blocks, alpha);
            const cplx direct = ratio_integrand_direct(p, kernel.n_a(), alpha);
            // The direct form multiplies e^{-beta h} by its inverse and loses
            // digits as beta grows; the low-rank form does not.
            EXPECT_NEAR(std::abs(low - direct), 0.0, beta > 1.0 ? 1e-8 : 1e-11) << beta << " " << alpha;
            // Even in alpha and real.
            EXPECT_NEAR(std::abs(ratio_integrand(blocks, -alpha) - low), 0.0, 1e-12);
            EXPECT_NEAR(low.imag(), 0.0, 1e-12);
        }
        EXPECT_NEAR(delta_s2_thermal(kernel, beta), delta_s2_direct(kernel, beta), beta > 1.0 ? 1e-8 : 1e-11);
        EXPECT_NEAR(delta_s2_thermal(kernel, beta), oracle::delta_s2_chain(L, 1.0, 0.0, kernel.partition.a_sites(), beta), 1e-12);
    }
}

TEST(PurityRatio, AnalyticModesMatchDiagonalization) {
    const int  L  = 12;
    const auto a  = tight_binding_modes(L, 0.7);
    const auto b  = mode_spectrum(tight_binding_kernel(L, 0.7));
    for(int k = 0; k < L; ++k) EXPECT_NEAR(a.energies(k), b.energies(k), 1e-13);
    const RMatrix pa = a.modes * a.energies.asDiagonal() * a.modes.transpose();
    EXPECT_LT((pa - tight_binding_kernel(L, 0.7)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(delta_s2_thermal(L, 0.7, 4, 1.3), delta_s2_thermal(SingleParticleKernel(tight_binding_kernel(L, 0.7), Bipartition::centered(L, 4)), 1.3), 1e-12);
}

TEST(PurityRatio, GaussianBackendMatchesManyBodyOracle) {
    for(int L : {4, 6, 8})
        for(int la = 1; la < L; ++la)
            for(double bt : {0.1, 1.0, 5.0}) {
                const auto split = Bipartition::prefix(L, la);
                const double gaussian = delta_s2_thermal(L, 1.0, la, bt, Placement::edge);
                EXPECT_NEAR(gaussian, oracle::delta_s2_chain(L, 1.0, 0.0, split.a_sites(), bt), 1e-8) << L << " " << la << " " << bt;
            }
    // Centered placement and an off-unit hopping.
    const auto split = Bipartition::centered(7, 3);
    EXPECT_NEAR(delta_s2_thermal(7, 0.5, 3, 2.0), oracle::delta_s2_chain(7, 0.5, 0.0, split.a_sites(), 2.0), 1e-10);
}

TEST(PurityRatio, StableDeepInTheLowTemperatureRegime) {
    // e^{-beta h} alone would overflow here; the bounded blocks do not.
    const double low  = delta_s2_thermal(200, 1.0, 20, 2000.0);
    const double high = delta_s2_thermal(200, 1.0, 20, 0.01);
    EXPECT_TRUE(std::isfinite(low));
    EXPECT_GT(low, 0.0);
    EXPECT_NEAR(high / high_t_delta_s2(1.0, 0.01), 1.0, 0.02);
}

TEST(PurityRatio, UnderResolvedGridIsFlagged) {
    const auto kernel = SingleParticleKernel(tight_binding_kernel(6, 1.0), Bipartition::prefix(6, 3));
    EXPECT_TRUE(tr_rho_m2_over_tr_rho2(kernel, 1.0, AlphaQuadrature::periodic(3)).under_resolved);
    EXPECT_FALSE(tr_rho_m2_over_tr_rho2(kernel, 1.0).under_resolved);
    EXPECT_THROW(tr_rho_m2_over_tr_rho2(kernel, 0.0), Error);
}

TEST(ChargeDistribution, PoissonBinomialFromOccupations) {
    const RVector       nu = (RVector(4) << 0.1, 0.5, 0.77, 0.99).finished();
    const auto          got = charge_distribution_from_occupations(nu);
    const auto          ref = oracle::poisson_binomial({0.1, 0.5, 0.77, 0.99});
    ASSERT_EQ(got.size(), ref.size());
    for(std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(got[k], ref[k], 1e-14);
}

TEST(ChargeDistribution, GroundStateMatchesManyBody) {
    for(int L : {6, 8, 10})
        for(int la : {1, 2, 3}) {
            GroundStateOptions opt;
            opt.placement = Placement::centered;
            const auto split = Bipartition::centered(L, la);
            const auto got   = ground_state_charge_distribution(L, la, opt);
            const auto ref   = oracle::ground_state_distribution(L, L / 2, split.a_sites());
            ASSERT_EQ(got.size(), ref.size());
            for(std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(got[k], ref[k], 1e-10) << L << " " << la << " " << k;
        }
}

TEST(ChargeDistribution, MeanIsHalfFillingAndTwoSiteIsLogTwo) {
    const auto p    = ground_state_charge_distribution(400, 40);
    double     mean = 0.0, total = 0.0;
    for(std::size_t k = 0; k < p.size(); ++k) {
        mean += static_cast<double>(k) * p[k];
        total += p[k];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(mean, 20.0, 1e-9);
    GroundStateOptions one;
    one.particles = 1;
    EXPECT_NEAR(number_entropy_ground_state(2, 1, one), std::log(2.0), 1e-12);
}

TEST(ChargeDistribution, NumberEntropyTracksTheFit) {
    for(int la : {10, 50, 100}) EXPECT_NEAR(number_entropy_ground_state(10 * la, la), number_entropy_fit(la), 0.03) << la;
}
