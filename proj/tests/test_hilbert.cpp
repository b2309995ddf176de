#include "nument/nument.hpp"

#include <gtest/gtest.h>

using namespace nument;

namespace {

Eigen::Index at(const OccupationBasis &b, const Occupation &occ) { return static_cast<Eigen::Index>(*b.index_of(occ)); }

DensityOperator maximally_mixed(const BasisHandle &b) {
    return {b, CMatrix(CMatrix::Identity(b->size(), b->size()) / static_cast<double>(b->size()))};
}

} // namespace

TEST(Basis, TwoSiteSpinOrdering) {
    auto b = build_basis(2, Statistics::hardcore);
    ASSERT_EQ(b->dimension(), 4u);
    EXPECT_EQ(b->state(0), (Occupation{0, 0}));
    EXPECT_EQ(b->state(1), (Occupation{0, 1}));
    EXPECT_EQ(b->state(2), (Occupation{1, 0}));
    EXPECT_EQ(b->state(3), (Occupation{1, 1}));
}

TEST(Basis, FourFermionSites) { EXPECT_EQ(build_basis(4, Statistics::fermion)->dimension(), 16u); }

TEST(Basis, TwoModeBosonSectorHasNPlusOneStates) {
    auto b = build_basis(2, Statistics::boson, std::nullopt, 3);
    ASSERT_EQ(b->dimension(), 4u);
    for(const auto &occ : b->states()) EXPECT_EQ(occ[0] + occ[1], 3);
    std::set<Occupation> got(b->states().begin(), b->states().end());
    EXPECT_EQ(got, (std::set<Occupation>{{3, 0}, {2, 1}, {1, 2}, {0, 3}}));
}

TEST(Basis, FixedChargeMatchesBinomial) {
    for(int L = 1; L <= 10; ++L)
        for(int N = 0; N <= L; ++N) {
            auto   b = build_basis(L, Statistics::hardcore, std::nullopt, N);
            double c = std::tgamma(L + 1) / (std::tgamma(N + 1) * std::tgamma(L - N + 1));
            EXPECT_EQ(static_cast<double>(b->dimension()), std::round(c));
        }
}

TEST(Basis, TooLargeIsRefused) {
    try {
        build_basis(22, Statistics::hardcore);
        FAIL() << "expected basis_too_large";
    } catch(const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::basis_too_large);
        EXPECT_NE(std::string(e.what()).find("basis too large"), std::string::npos);
    }
    EXPECT_NO_THROW(build_basis(22, Statistics::hardcore, std::nullopt, std::nullopt, std::size_t{1} << 23));
}

TEST(Basis, EnumerationIsDeterministic) {
    auto a = build_basis(5, Statistics::boson, 2, 4);
    auto b = build_basis(5, Statistics::boson, 2, 4);
    EXPECT_EQ(a->states(), b->states());
    EXPECT_TRUE(std::is_sorted(a->states().begin(), a->states().end()));
}

TEST(Bipartition, RejectsEmptyOrFullSubsystem) {
    EXPECT_THROW(Bipartition(3, {}), Error);
    EXPECT_THROW(Bipartition(2, {0, 1}), Error);
    EXPECT_THROW(Bipartition(2, {2}), Error);
    const Bipartition p(4, {1, 2});
    EXPECT_EQ(p.b_sites(), (std::vector<int>{0, 3}));
    EXPECT_EQ(Bipartition::centered(10, 4).a_sites(), (std::vector<int>{3, 4, 5, 6}));
}

TEST(ChargeOperators, SubsystemChargeDiagonal) {
    auto b = build_basis(2, Statistics::hardcore);
    // A = first site: |00>,|01>,|10>,|11> -> 0,0,1,1
    const CMatrix na = subsystem_charge_operator(*b, Bipartition::prefix(2, 1));
    EXPECT_EQ(na.diagonal().real(), (RVector(4) << 0, 0, 1, 1).finished());
    EXPECT_EQ(linalg::max_abs(CMatrix(na - CMatrix(na.diagonal().asDiagonal()))), 0.0);

    auto f = build_basis(4, Statistics::fermion);
    const RVector d = subsystem_charge_diagonal(*f, Bipartition::prefix(4, 2));
    EXPECT_EQ(d(at(*f, {1, 1, 0, 0})), 2.0);
}

TEST(ChargeOperators, CommutesWithOperatorsSupportedInsideAOrB) {
    auto              b = build_basis(4, Statistics::fermion);
    const Bipartition p = Bipartition::prefix(4, 2);
    const CMatrix     na = subsystem_charge_operator(*b, p);
    const CMatrix     hop_a = hopping_operator(*b, 0, 1) + hopping_operator(*b, 1, 0);
    const CMatrix     hop_b = hopping_operator(*b, 2, 3) + hopping_operator(*b, 3, 2);
    const CMatrix     across = hopping_operator(*b, 1, 2);
    EXPECT_EQ(linalg::max_abs(linalg::commutator(na, hop_a)), 0.0);
    EXPECT_EQ(linalg::max_abs(linalg::commutator(na, hop_b)), 0.0);
    EXPECT_GT(linalg::max_abs(linalg::commutator(na, across)), 0.5);
}

TEST(ChargeMap, RecomputesFromOccupations) {
    auto       b = build_basis(3, Statistics::boson, 2);
    const auto p = Bipartition(3, {0, 2});
    const auto m = ChargeMap::compute(*b, p);
    for(std::size_t i = 0; i < b->dimension(); ++i) {
        const auto &occ = b->state(i);
        EXPECT_EQ(m.total[i], occ[0] + occ[1] + occ[2]);
        EXPECT_EQ(m.subsystem[i], occ[0] + occ[2]);
        EXPECT_LE(m.subsystem[i], m.total[i]);
    }
}

TEST(Projection, BlockDiagonalStateIsFixedPoint) {
    auto    b = build_basis(2, Statistics::hardcore);
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = 0.2;
    m(1, 1) = 0.3;
    m(2, 2) = 0.4;
    m(3, 3) = 0.1;
    const DensityOperator rho(b, m);
    EXPECT_EQ(project_subsystem_charge(rho, Bipartition::prefix(2, 1)).matrix(), m);
}

TEST(Projection, ProductSuperpositionLosesCoherence) {
    // |0> (|0> + |1>)/sqrt2 measured on the second site.
    const auto rho = named_state(StateTag::phi2);
    const auto pm  = project_subsystem_charge(rho, Bipartition(2, {1}));
    CMatrix    expected = CMatrix::Zero(4, 4);
    expected(0, 0) = expected(1, 1) = 0.5;
    EXPECT_LT(linalg::max_abs(CMatrix(pm.matrix() - expected)), 1e-15);
}

TEST(Projection, XxzThermalKeepsDiagonalDropsHopping) {
    const auto rho = thermal_state(xxz_chain(2, 1.0, 2.0), 1.3);
    const auto pm  = project_subsystem_charge(rho, Bipartition::prefix(2, 1));
    CMatrix    expected = rho.matrix();
    expected(1, 2) = expected(2, 1) = 0.0;
    EXPECT_LT(std::abs(rho.matrix()(1, 2)), 1.0);
    EXPECT_GT(std::abs(rho.matrix()(1, 2)), 0.1);
    EXPECT_EQ(pm.matrix(), expected);
}

TEST(Projection, IdempotentTracePreservingAndSymmetricInAB) {
    Rng rng(11);
    for(int trial = 0; trial < 50; ++trial) {
        auto       b   = build_basis(4, Statistics::hardcore);
        const auto p   = Bipartition(4, {0, 2});
        const auto rho = random_symmetric_state(b, rng);
        const auto once  = project_subsystem_charge(rho, p);
        const auto twice = project_subsystem_charge(once, p);
        EXPECT_EQ(once.matrix(), twice.matrix());
        EXPECT_NEAR(once.trace(), 1.0, 1e-12);
        EXPECT_LT(linalg::max_abs(CMatrix(once.matrix() - project_subsystem_charge(rho, p.swapped()).matrix())), 1e-12);
    }
}

TEST(PhaseAverage, EqualsProjectorSum) {
    Rng rng(3);
    auto       b   = build_basis(4, Statistics::hardcore);
    const auto p   = Bipartition::prefix(4, 2);
    const auto rho = random_symmetric_state(b, rng);
    const auto ref = project_subsystem_charge(rho, p).matrix();
    for(int M : {3, 4, 7}) EXPECT_LT(linalg::max_abs(CMatrix(phase_average(rho, p, M).matrix() - ref)), 1e-12) << M;
    EXPECT_LT(linalg::max_abs(CMatrix(phase_average(rho, p).matrix() - ref)), 1e-12);
}

TEST(PhaseAverage, TwoPhasesReproduceProductSuperpositionResult) {
    const auto rho = named_state(StateTag::phi2);
    const auto p   = Bipartition(2, {1});
    EXPECT_LT(linalg::max_abs(CMatrix(phase_average(rho, p, 2).matrix() - project_subsystem_charge(rho, p).matrix())), 1e-12);
}

TEST(PhaseAverage, SinglePhaseOnlyWhenNoSpread) {
    auto       b   = build_basis(3, Statistics::hardcore);
    const auto rho = maximally_mixed(b);
    try {
        phase_average(rho, Bipartition::prefix(3, 2), 1);
        FAIL() << "expected aliasing";
    } catch(const Error &e) { EXPECT_EQ(e.code(), ErrorCode::aliasing); }
    EXPECT_THROW(phase_average(rho, Bipartition::prefix(3, 2), 2), Error);
    // A fixed-N sector with a single-site A in a one-particle state has no spread in N_A.
    auto    fixed = build_basis(2, Statistics::hardcore, std::nullopt, 0);
    CMatrix m     = CMatrix::Ones(1, 1);
    const DensityOperator vac(fixed, m);
    EXPECT_EQ(phase_average(vac, Bipartition::prefix(2, 1), 1).matrix(), m);
}

TEST(TotalCharge, InfiniteTemperatureWeights) {
    const auto rho = maximally_mixed(build_basis(2, Statistics::hardcore));
    EXPECT_NEAR(project_total_charge(rho, 0).probability, 0.25, 1e-15);
    EXPECT_NEAR(project_total_charge(rho, 1).probability, 0.5, 1e-15);
    EXPECT_NEAR(project_total_charge(rho, 2).probability, 0.25, 1e-15);
}

TEST(TotalCharge, TwoModeBosonOneParticleBlock) {
    // In the full two-mode space truncated at one boson per mode the N = 1
    // block of the Gibbs state is [[1/2, -tanh/2], [-tanh/2, 1/2]] for t = -1.
    const double beta = 0.8;
    const auto   h    = two_mode_boson_sector(0.3, -1.0, 1);
    const auto   rho  = thermal_state(h, beta);
    const auto   th   = std::tanh(beta);
    EXPECT_NEAR(rho.matrix()(0, 0).real(), 0.5, 1e-14);
    EXPECT_NEAR(rho.matrix()(0, 1).real(), 0.5 * th, 1e-14);
    const auto rho_pos = thermal_state(two_mode_boson_sector(0.3, 1.0, 1), beta);
    EXPECT_NEAR(rho_pos.matrix()(0, 1).real(), -0.5 * th, 1e-14);
}

TEST(TotalCharge, FixedChargePureState) {
    Rng        rng(5);
    auto       b   = build_basis(3, Statistics::hardcore);
    const auto rho = random_fixed_charge_state(b, 2, rng);
    EXPECT_NEAR(project_total_charge(rho, 2).probability, 1.0, 1e-12);
    try {
        project_total_charge(rho, 1);
        FAIL() << "expected empty sector";
    } catch(const Error &e) { EXPECT_EQ(e.code(), ErrorCode::empty_sector); }
}

TEST(TotalCharge, SectorsReassembleBlockDiagonalPart) {
    Rng        rng(9);
    auto       b   = build_basis(3, Statistics::hardcore);
    const auto rho = random_symmetric_state(b, rng);
    CMatrix    sum = CMatrix::Zero(b->size(), b->size());
    double     p   = 0.0;
    for(const auto &s : total_charge_sectors(rho)) {
        p += s.probability;
        sum += s.probability * embed(s.state.matrix(), s.state.basis(), *b);
    }
    EXPECT_NEAR(p, 1.0, 1e-12);
    EXPECT_LT(linalg::max_abs(CMatrix(sum - rho.matrix())), 1e-12);
}

TEST(DensityOperator, RejectsInvalidMatrices) {
    auto    b = build_basis(1, Statistics::hardcore);
    CMatrix m(2, 2);
    m << 0.5, 0.1, 0.2, 0.5;
    EXPECT_THROW(DensityOperator(b, m), Error);
    m << 0.6, 0.0, 0.0, 0.6;
    EXPECT_THROW(DensityOperator(b, m), Error);
    m << 1.2, 0.0, 0.0, -0.2;
    try {
        DensityOperator bad(b, m);
        FAIL();
    } catch(const Error &e) { EXPECT_EQ(e.code(), ErrorCode::psd_violation); }
}
