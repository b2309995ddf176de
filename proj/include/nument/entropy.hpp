#pragma once

// Entropy functionals (natural log throughout) and the number-entanglement
// witness Delta S_m = S(rho_m) - S(rho).

#include "nument/hilbert.hpp"
#include "nument/linalg.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <vector>

namespace nument {

struct SpectralClamp {
    double eigenvalue_floor = 1e-12; ///< |lambda| <= floor contributes nothing
    double psd_tolerance    = 1e-10; ///< lambda < -max(floor, tol) is an error
};

/// -sum lambda log lambda over a spectrum.
inline double entropy_of_spectrum(const RVector &values, const SpectralClamp &clamp = {}) {
    double s = 0.0;
    for(double v : values) {
        if(v < -std::max(clamp.eigenvalue_floor, clamp.psd_tolerance))
            throw Error(ErrorCode::psd_violation, "PSD violation: eigenvalue " + std::to_string(v));
        if(v <= clamp.eigenvalue_floor) continue;
        s -= v * std::log(v);
    }
    return s;
}

inline double shannon_entropy(std::span<const double> probabilities) {
    double h = 0.0;
    for(double p : probabilities)
        if(p > 0.0) h -= p * std::log(p);
    return h;
}

inline double von_neumann_entropy(const CMatrix &m, const SpectralClamp &clamp = {}) {
    return entropy_of_spectrum(linalg::eigvalsh(m), clamp);
}

inline double von_neumann_entropy(const DensityOperator &rho, const SpectralClamp &clamp = {}) {
    return von_neumann_entropy(rho.matrix(), clamp);
}

/// -log Tr rho^2; for a hermitian matrix Tr rho^2 is the squared Frobenius norm.
inline double renyi2_entropy(const CMatrix &m) { return -std::log(linalg::hermitize(m).squaredNorm()); }

inline double renyi2_entropy(const DensityOperator &rho) { return renyi2_entropy(rho.matrix()); }

struct SectorEntropy {
    int    subsystem_charge;
    double probability;
    double entropy; ///< S(rho(N_A)) of the normalized block
};

struct WitnessReport {
    double                     s_rho    = 0.0;
    double                     s_rho_m  = 0.0;
    double                     delta_s_m = 0.0;
    std::vector<SectorEntropy> sectors;
    double                     charge_commutator_norm = 0.0;
    /// false when [rho, N] != 0: the number is still computed but does not
    /// witness entanglement.
    bool                       symmetric = true;
};

inline constexpr double symmetry_tolerance = 1e-10;

namespace detail {

/// Groups basis indices by subsystem charge.
inline std::map<int, std::vector<Eigen::Index>> subsystem_blocks(const OccupationBasis &basis, const Bipartition &partition) {
    std::map<int, std::vector<Eigen::Index>> blocks;
    for(std::size_t i = 0; i < basis.dimension(); ++i)
        blocks[partition.charge_a(basis.state(i))].push_back(static_cast<Eigen::Index>(i));
    return blocks;
}

inline CMatrix principal_block(const CMatrix &m, const std::vector<Eigen::Index> &idx) {
    CMatrix out(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for(std::size_t j = 0; j < idx.size(); ++j)
        for(std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(idx[i], idx[j]);
    return out;
}

} // namespace detail

/// Per-N_A block probabilities and normalized block entropies of rho.
inline std::vector<SectorEntropy> subsystem_sector_entropies(const DensityOperator &rho, const Bipartition &partition,
                                                             const SpectralClamp &clamp = {}) {
    std::vector<SectorEntropy> out;
    for(const auto &[charge, idx] : detail::subsystem_blocks(rho.basis(), partition)) {
        CMatrix      block = detail::principal_block(rho.matrix(), idx);
        const double p     = block.trace().real();
        double       s     = 0.0;
        if(p > empty_sector_threshold) s = von_neumann_entropy(CMatrix(block / p), clamp);
        out.push_back({charge, std::max(p, 0.0), s});
    }
    return out;
}

inline WitnessReport number_entanglement(const DensityOperator &rho, const Bipartition &partition,
                                         const SpectralClamp &clamp = {}) {
    WitnessReport r;
    r.charge_commutator_norm = rho.charge_commutator_norm();
    r.symmetric              = r.charge_commutator_norm <= symmetry_tolerance;
    r.s_rho                  = von_neumann_entropy(rho, clamp);
    // rho_m is block diagonal, so its spectrum is the union of the block spectra.
    double s_m = 0.0;
    for(const auto &[charge, idx] : detail::subsystem_blocks(rho.basis(), partition)) {
        CMatrix block = detail::principal_block(rho.matrix(), idx);
        s_m += von_neumann_entropy(block, clamp);
        const double p = block.trace().real();
        r.sectors.push_back({charge, std::max(p, 0.0), p > empty_sector_threshold ? von_neumann_entropy(CMatrix(block / p), clamp) : 0.0});
    }
    r.s_rho_m   = s_m;
    r.delta_s_m = r.s_rho_m - r.s_rho;
    return r;
}

/// Witness for a joint measurement of several independently conserved
/// subsystem charges (one bipartition per flavor).
inline double number_entanglement(const DensityOperator &rho, std::span<const Bipartition> partitions,
                                  const SpectralClamp &clamp = {}) {
    const DensityOperator measured = project_subsystem_charges(rho, partitions);
    return von_neumann_entropy(measured, clamp) - von_neumann_entropy(rho, clamp);
}

/// S_2(rho_m) - S_2(rho).
inline double delta_renyi2(const DensityOperator &rho, const Bipartition &partition) {
    return renyi2_entropy(project_subsystem_charge(rho, partition)) - renyi2_entropy(rho);
}

struct RelativeEntropy {
    double value    = 0.0;
    bool   infinite = false; ///< support(rho) not contained in support(sigma)
};

inline constexpr double support_tolerance = 1e-9;

/// S(rho || sigma) = Tr rho log rho - Tr rho log sigma.
inline RelativeEntropy relative_entropy(const DensityOperator &rho, const DensityOperator &sigma,
                                        const SpectralClamp &clamp = {}) {
    require(rho.dimension() == sigma.dimension(), ErrorCode::invalid_argument, "relative entropy of mismatched operators");
    const auto sig = linalg::eigh(sigma.matrix());
    const CMatrix rho_h = linalg::hermitize(rho.matrix());
    double cross   = 0.0;
    double leakage = 0.0;
    for(Eigen::Index k = 0; k < sig.values.size(); ++k) {
        const double weight = (sig.vectors.col(k).adjoint() * rho_h * sig.vectors.col(k)).value().real();
        const double lambda = sig.values(k);
        if(lambda < -std::max(clamp.eigenvalue_floor, clamp.psd_tolerance))
            throw Error(ErrorCode::psd_violation, "PSD violation in sigma: eigenvalue " + std::to_string(lambda));
        if(lambda <= clamp.eigenvalue_floor) {
            leakage += std::max(weight, 0.0);
            continue;
        }
        cross += weight * std::log(lambda);
    }
    if(leakage > support_tolerance) return {std::numeric_limits<double>::infinity(), true};
    const double value = -von_neumann_entropy(rho, clamp) - cross;
    return {value < 0.0 && value > -1e-12 ? 0.0 : value, false};
}

/// P(N_A) of a pure state, indexed by N_A = 0..capacity of A.
inline std::vector<double> subsystem_charge_distribution(const OccupationBasis &basis, const CVector &psi,
                                                         const Bipartition &partition) {
    require(psi.size() == basis.size(), ErrorCode::invalid_argument, "state vector does not match basis");
    require_compatible(basis, partition);
    const int           cap = partition.size_a() * basis.per_site_cap();
    std::vector<double> p(static_cast<std::size_t>(cap) + 1, 0.0);
    const double        norm2 = psi.squaredNorm();
    for(std::size_t i = 0; i < basis.dimension(); ++i)
        p[static_cast<std::size_t>(partition.charge_a(basis.state(i)))] += std::norm(psi(static_cast<Eigen::Index>(i))) / norm2;
    return p;
}

inline double number_entropy_pure(const OccupationBasis &basis, const CVector &psi, const Bipartition &partition) {
    const auto p = subsystem_charge_distribution(basis, psi, partition);
    return shannon_entropy(p);
}

struct SreDecomposition {
    double                     shannon;         ///< H_1 of P(N_A)
    double                     weighted_change; ///< sum P(N_A) [S(rho(N_A)) - S(rho)]
    double                     delta_s_m;       ///< their sum
    std::vector<SectorEntropy> sectors;
};

inline SreDecomposition sre_decomposition(const DensityOperator &rho, const Bipartition &partition,
                                          const SpectralClamp &clamp = {}) {
    SreDecomposition d{};
    const double     s_rho = von_neumann_entropy(rho, clamp);
    d.sectors              = subsystem_sector_entropies(rho, partition, clamp);
    std::vector<double> probs;
    for(const auto &sec : d.sectors) {
        probs.push_back(sec.probability);
        if(sec.probability <= empty_sector_threshold) continue; // 0 log 0
        d.weighted_change += sec.probability * (sec.entropy - s_rho);
    }
    d.shannon   = shannon_entropy(probs);
    d.delta_s_m = d.shannon + d.weighted_change;
    return d;
}

/// Entropy change from measuring the fermion parity (-1)^{N_A} of A instead
/// of N_A itself.
inline double parity_entanglement(const DensityOperator &rho, const Bipartition &partition,
                                  const SpectralClamp &clamp = {}) {
    const auto &basis = rho.basis();
    require_compatible(basis, partition);
    CMatrix out = rho.matrix();
    for(Eigen::Index j = 0; j < out.cols(); ++j)
        for(Eigen::Index i = 0; i < out.rows(); ++i)
            if((partition.charge_a(basis.state(static_cast<std::size_t>(i))) -
                partition.charge_a(basis.state(static_cast<std::size_t>(j)))) % 2 != 0)
                out(i, j) = 0.0;
    return von_neumann_entropy(out, clamp) - von_neumann_entropy(rho, clamp);
}

} // namespace nument
