#pragma once

// Gaussian (free-fermion) backend. Traces of products of quadratic
// exponentials reduce to L x L determinants, Tr e^{c^dag S c} = det(I + e^S),
// which gives Delta S_2 of thermal states and the ground-state subsystem
// charge distribution for chains of a thousand sites.

#include "nument/hilbert.hpp"
#include "nument/linalg.hpp"
#include "nument/models.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

namespace nument {

/// Where a contiguous subsystem sits in an open chain.
enum class Placement { centered, edge };

inline Bipartition place_subsystem(int L, int L_A, Placement placement) {
    return placement == Placement::centered ? Bipartition::centered(L, L_A) : Bipartition::prefix(L, L_A);
}

/// H = sum c^dag_i h_ij c_j together with the A-site selector n^A.
struct SingleParticleKernel {
    RMatrix     h;
    Bipartition partition;

    SingleParticleKernel(RMatrix hopping, Bipartition split) : h(std::move(hopping)), partition(std::move(split)) {
        require(h.rows() == h.cols() && h.rows() == partition.num_sites(), ErrorCode::invalid_argument,
                "kernel and partition disagree on the number of sites");
        require((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-12, ErrorCode::invalid_argument,
                "single-particle kernel must be symmetric");
    }

    [[nodiscard]] int num_sites() const { return static_cast<int>(h.rows()); }

    [[nodiscard]] RVector n_a() const {
        RVector d = RVector::Zero(h.rows());
        for(int s : partition.a_sites()) d(s) = 1.0;
        return d;
    }
};

/// Orthonormal single-particle modes (columns) and their energies, ascending.
struct ModeSpectrum {
    RVector energies;
    RMatrix modes;
};

inline ModeSpectrum mode_spectrum(const RMatrix &h) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
    require(es.info() == Eigen::Success, ErrorCode::numerical_failure, "single-particle diagonalization failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

/// Open tight-binding chain: phi_k(j) = sqrt(2/(L+1)) sin(pi k j/(L+1)),
/// eps_k = -2t cos(pi k/(L+1)), k = 1..L (ascending for t > 0).
inline ModeSpectrum tight_binding_modes(int L, double t) {
    require(L >= 2, ErrorCode::invalid_argument, "tight-binding chain needs L >= 2");
    ModeSpectrum ms{RVector(L), RMatrix(L, L)};
    const double norm = std::sqrt(2.0 / (L + 1));
    for(int k = 1; k <= L; ++k) {
        ms.energies(k - 1) = -2.0 * t * std::cos(pi * k / (L + 1));
        for(int j = 1; j <= L; ++j) ms.modes(j - 1, k - 1) = norm * std::sin(pi * k * j / (L + 1));
    }
    if(t < 0.0) { // keep energies ascending
        ms.energies.reverseInPlace();
        ms.modes.rowwise().reverseInPlace();
    }
    return ms;
}

/// Nodes u and weights w with sum_k w_k f(u_k) approximating
/// int_{-2pi}^{2pi} du f(u) (2pi - |u|)/(2pi)^2 for f even in u.
struct AlphaQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    int                 resolution = 0; ///< exact for charge spreads below this

    /// For 2pi-periodic f the triangular integral equals the mean over one
    /// period, and a uniform M-point grid is exact for charge spreads < M.
    /// Nodes are folded onto [0, pi] by evenness.
    static AlphaQuadrature periodic(int M) {
        require(M >= 1, ErrorCode::invalid_argument, "phase grid needs at least one node");
        AlphaQuadrature q;
        q.resolution = M;
        for(int k = 0; 2 * k <= M; ++k) {
            q.nodes.push_back(2.0 * pi * k / M);
            const bool self_mirror = k == 0 || 2 * k == M;
            q.weights.push_back((self_mirror ? 1.0 : 2.0) / M);
        }
        return q;
    }

    /// Gauss-Legendre on [0, 2pi] against the folded weight 2(2pi - u)/(2pi)^2,
    /// for integrands that are not periodic.
    template<int N = 30>
    static AlphaQuadrature triangular_gauss() {
        AlphaQuadrature q;
        q.resolution = 0;
        const auto &x = boost::math::quadrature::gauss<double, N>::abscissa();
        const auto &w = boost::math::quadrature::gauss<double, N>::weights();
        auto push = [&](double xi, double wi) {
            const double u = pi * (1.0 + xi);
            q.nodes.push_back(u);
            q.weights.push_back(wi * pi * 2.0 * (2.0 * pi - u) / (4.0 * pi * pi));
        };
        for(std::size_t i = 0; i < x.size(); ++i) {
            push(x[i], w[i]);
            if(x[i] != 0.0) push(-x[i], w[i]);
        }
        return q;
    }

    [[nodiscard]] double weight_sum() const {
        double s = 0.0;
        for(double w : weights) s += w;
        return s;
    }
};

/// log Tr e^{c^dag S c} = log det(I + e^S), with the phase of a complex
/// determinant kept in the imaginary part.
inline cplx log_gaussian_trace(const CMatrix &S) {
    const CMatrix eS = S.exp();
    return linalg::log_det(CMatrix(CMatrix::Identity(S.rows(), S.cols()) + eS));
}

inline cplx gaussian_trace(const CMatrix &S) { return std::exp(log_gaussian_trace(S)); }

/// Tr (prod_k e^{c^dag S_k c}) from the single-particle propagators G_k = e^{S_k}.
inline cplx log_gaussian_trace_of_product(const std::vector<CMatrix> &propagators) {
    require(!propagators.empty(), ErrorCode::invalid_argument, "empty propagator product");
    CMatrix g = propagators.front();
    for(std::size_t k = 1; k < propagators.size(); ++k) g = g * propagators[k];
    return linalg::log_det(CMatrix(CMatrix::Identity(g.rows(), g.cols()) + g));
}

/// F with e^F = e^A e^B, so e^{c^dag A c} e^{c^dag B c} = e^{c^dag F c}.
/// Principal matrix logarithm; only sensible when e^A e^B has no spectrum
/// on the negative real axis.
inline CMatrix combine_exponents(const CMatrix &A, const CMatrix &B) {
    const CMatrix g = A.exp() * B.exp();
    return g.log();
}

struct RatioResult {
    double value          = 1.0; ///< Tr rho_m^2 / Tr rho^2
    bool   under_resolved = false; ///< phase grid coarser than the charge spread of A
};

/// Thermal two-point data restricted to A: C = f(2 beta h) (Fermi function at
/// inverse temperature 2 beta) and S = 1/(2 cosh(beta h)). Both are bounded,
/// so the ratio integrand stays well conditioned at any temperature.
struct ThermalBlocks {
    RMatrix c;
    RMatrix s;
};

inline ThermalBlocks thermal_blocks(const ModeSpectrum &ms, const std::vector<int> &a_sites, double beta) {
    const auto n_a = static_cast<Eigen::Index>(a_sites.size());
    const auto L   = ms.energies.size();
    RVector    fc(L), fs(L);
    for(Eigen::Index k = 0; k < L; ++k) {
        const double x = beta * ms.energies(k);
        fc(k)          = 0.5 * (1.0 - std::tanh(x));
        const double y = std::exp(-std::abs(x));
        fs(k)          = y / (1.0 + y * y);
    }
    RMatrix va(n_a, L);
    for(Eigen::Index i = 0; i < n_a; ++i) va.row(i) = ms.modes.row(a_sites[static_cast<std::size_t>(i)]);
    return {va * fc.asDiagonal() * va.transpose(), va * fs.asDiagonal() * va.transpose()};
}

/// Tr(e^{-bH} e^{-i a N_A} e^{-bH} e^{i a N_A}) / Tr e^{-2bH}, as the
/// 2 L_A x 2 L_A determinant left after the low-rank update of det(I + P D P D^-1).
inline cplx ratio_integrand(const ThermalBlocks &blocks, double alpha) {
    const auto    n = blocks.c.rows();
    const cplx    x = std::exp(cplx(0.0, -alpha)) - 1.0;
    CMatrix       m(2 * n, 2 * n);
    const RMatrix id = RMatrix::Identity(n, n);
    m.topLeftCorner(n, n)     = (x * (id - blocks.c).cast<cplx>());
    m.topRightCorner(n, n)    = x * blocks.s.cast<cplx>();
    m.bottomLeftCorner(n, n)  = x * blocks.s.cast<cplx>();
    m.bottomRightCorner(n, n) = x * blocks.c.cast<cplx>();
    m.diagonal().array() += 1.0;
    return std::exp(linalg::log_det(m) + cplx(0.0, alpha * static_cast<double>(n)));
}

/// Same quantity formed directly from the L x L propagators.
inline cplx ratio_integrand_direct(const RMatrix &propagator, const RVector &n_a, double alpha) {
    const CVector d    = (cplx(0.0, -alpha) * n_a.cast<cplx>()).array().exp();
    const CMatrix p    = propagator.cast<cplx>();
    const CMatrix prod = p * d.asDiagonal() * p * d.conjugate().asDiagonal();
    const auto    L    = propagator.rows();
    const cplx    num  = linalg::log_det(CMatrix(CMatrix::Identity(L, L) + prod));
    const cplx    den  = linalg::log_det(CMatrix(CMatrix::Identity(L, L) + p * p));
    return std::exp(num - den);
}

inline AlphaQuadrature default_quadrature(int L_A) { return AlphaQuadrature::periodic(2 * (L_A + 1)); }

inline RatioResult tr_rho_m2_over_tr_rho2(const ModeSpectrum &ms, const std::vector<int> &a_sites, double beta,
                                          const AlphaQuadrature &quadrature) {
    require(beta > 0.0, ErrorCode::invalid_argument, "inverse temperature must be positive");
    RatioResult r;
    r.under_resolved = quadrature.resolution <= static_cast<int>(a_sites.size());
    if(a_sites.empty()) return r;
    const ThermalBlocks blocks = thermal_blocks(ms, a_sites, beta);
    double              acc    = 0.0;
    for(std::size_t k = 0; k < quadrature.nodes.size(); ++k)
        acc += quadrature.weights[k] * ratio_integrand(blocks, quadrature.nodes[k]).real();
    r.value = acc;
    require(std::isfinite(acc) && acc > 0.0, ErrorCode::numerical_failure, "purity ratio is not positive");
    return r;
}

inline RatioResult tr_rho_m2_over_tr_rho2(const SingleParticleKernel &kernel, double beta,
                                          const AlphaQuadrature &quadrature) {
    return tr_rho_m2_over_tr_rho2(mode_spectrum(kernel.h), kernel.partition.a_sites(), beta, quadrature);
}

inline RatioResult tr_rho_m2_over_tr_rho2(const SingleParticleKernel &kernel, double beta) {
    return tr_rho_m2_over_tr_rho2(kernel, beta, default_quadrature(kernel.partition.size_a()));
}

/// Direct product route, O(L^3) per phase node; for cross-checks at small L.
inline double delta_s2_direct(const SingleParticleKernel &kernel, double beta) {
    require(beta > 0.0, ErrorCode::invalid_argument, "inverse temperature must be positive");
    const ModeSpectrum ms = mode_spectrum(kernel.h);
    const RMatrix      p  = ms.modes * (-beta * ms.energies).array().exp().matrix().asDiagonal() * ms.modes.transpose();
    const auto         q  = default_quadrature(kernel.partition.size_a());
    const RVector      na = kernel.n_a();
    double             acc = 0.0;
    for(std::size_t k = 0; k < q.nodes.size(); ++k) acc += q.weights[k] * ratio_integrand_direct(p, na, q.nodes[k]).real();
    return -std::log(acc);
}

inline double delta_s2_thermal(const SingleParticleKernel &kernel, double beta) {
    return -std::log(tr_rho_m2_over_tr_rho2(kernel, beta).value);
}

/// Delta S_2 of the open tight-binding chain at inverse temperature beta.
inline double delta_s2_thermal(int L, double t, int L_A, double beta, Placement placement = Placement::centered) {
    require(beta > 0.0, ErrorCode::invalid_argument, "inverse temperature must be positive");
    const Bipartition split = place_subsystem(L, L_A, placement);
    const auto        ms    = tight_binding_modes(L, t);
    return -std::log(tr_rho_m2_over_tr_rho2(ms, split.a_sites(), beta, default_quadrature(L_A)).value);
}

/// Ground-state correlation matrix <c^dag_i c_j> restricted to A, with the
/// lowest `particles` modes filled.
inline RMatrix ground_state_correlation_a(const ModeSpectrum &ms, const std::vector<int> &a_sites, int particles) {
    const auto n_a = static_cast<Eigen::Index>(a_sites.size());
    RMatrix    va(n_a, particles);
    for(Eigen::Index i = 0; i < n_a; ++i) va.row(i) = ms.modes.row(a_sites[static_cast<std::size_t>(i)]).head(particles);
    return va * va.transpose();
}

inline constexpr double probability_tolerance = 1e-10;

/// P(N_A) from the eigenvalues nu of C_A: the characteristic function
/// prod (1 - nu + nu e^{i a}) sampled on L_A + 1 phases, then inverted.
inline std::vector<double> charge_distribution_from_occupations(const RVector &nu) {
    const auto n = nu.size();
    const auto M = n + 1;
    std::vector<double> p(static_cast<std::size_t>(M), 0.0);
    std::vector<cplx>   chi(static_cast<std::size_t>(M));
    for(Eigen::Index k = 0; k < M; ++k) {
        const cplx z = std::exp(cplx(0.0, 2.0 * pi * static_cast<double>(k) / static_cast<double>(M)));
        cplx       c = 1.0;
        for(Eigen::Index j = 0; j < n; ++j) c *= (1.0 - nu(j)) + nu(j) * z;
        chi[static_cast<std::size_t>(k)] = c;
    }
    for(Eigen::Index q = 0; q < M; ++q) {
        cplx acc = 0.0;
        for(Eigen::Index k = 0; k < M; ++k)
            acc += chi[static_cast<std::size_t>(k)] *
                   std::exp(cplx(0.0, -2.0 * pi * static_cast<double>(k * q % M) / static_cast<double>(M)));
        double v = acc.real() / static_cast<double>(M);
        require(v >= -probability_tolerance, ErrorCode::numerical_failure,
                "negative probability " + std::to_string(v) + " in charge distribution");
        p[static_cast<std::size_t>(q)] = std::max(v, 0.0);
    }
    return p;
}

struct GroundStateOptions {
    double             t         = 1.0;
    Placement          placement = Placement::centered;
    std::optional<int> particles; ///< default floor(L/2)
};

inline std::vector<double> ground_state_charge_distribution(int L, int L_A, const GroundStateOptions &opt = {}) {
    require(L_A >= 1 && L_A < L, ErrorCode::invalid_argument, "need 1 <= L_A < L");
    const int particles = opt.particles.value_or(L / 2);
    require(particles >= 0 && particles <= L, ErrorCode::invalid_argument, "particle number out of range");
    const auto    ms    = tight_binding_modes(L, opt.t);
    const auto    split = place_subsystem(L, L_A, opt.placement);
    const RMatrix ca    = ground_state_correlation_a(ms, split.a_sites(), particles);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(ca, Eigen::EigenvaluesOnly);
    const RVector nu = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
    return charge_distribution_from_occupations(nu);
}

inline double number_entropy_ground_state(int L, int L_A, const GroundStateOptions &opt = {}) {
    double h = 0.0;
    for(double p : ground_state_charge_distribution(L, L_A, opt))
        if(p > 0.0) h -= p * std::log(p);
    return h;
}

} // namespace nument
