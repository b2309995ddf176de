#pragma once

// Seeded samplers for property tests and demos: charge-symmetric mixed
// states, symmetric-separable mixtures, and symmetry-preserving local
// unitaries. All samplers take the generator by reference; identical seeds
// give identical draws.

#include "nument/hilbert.hpp"
#include "nument/linalg.hpp"
#include "nument/locc.hpp"

#include <map>
#include <random>
#include <vector>

namespace nument {

using Rng = std::mt19937_64;

/// Random density matrix W W^dagger / Tr, W complex Gaussian dim x rank.
template<class G>
CMatrix random_wishart(Eigen::Index dim, Eigen::Index rank, G &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix                          w(dim, rank);
    for(Eigen::Index j = 0; j < rank; ++j)
        for(Eigen::Index i = 0; i < dim; ++i) w(i, j) = cplx(gauss(rng), gauss(rng));
    CMatrix rho = w * w.adjoint();
    return linalg::hermitize(rho / rho.trace().real());
}

/// Haar-like unitary from the QR decomposition of a Gaussian matrix.
template<class G>
CMatrix random_unitary(Eigen::Index dim, G &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix                          z(dim, dim);
    for(Eigen::Index j = 0; j < dim; ++j)
        for(Eigen::Index i = 0; i < dim; ++i) z(i, j) = cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix                       q = qr.householderQ();
    const CMatrix                 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for(Eigen::Index k = 0; k < dim; ++k) {
        const double a = std::abs(r(k, k));
        if(a > 0.0) q.col(k) *= r(k, k) / a;
    }
    return q;
}

/// Dirichlet(1, ..., 1) weights.
template<class G>
std::vector<double> random_simplex(std::size_t n, G &rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double>                   w(n);
    double                                s = 0.0;
    for(auto &x : w) s += (x = expo(rng));
    for(auto &x : w) x /= s;
    return w;
}

namespace detail {
template<class Fill>
CMatrix charge_block_matrix(const std::vector<int> &charges, Fill &&fill) {
    const auto                               n = static_cast<Eigen::Index>(charges.size());
    std::map<int, std::vector<Eigen::Index>> groups;
    for(Eigen::Index i = 0; i < n; ++i) groups[charges[static_cast<std::size_t>(i)]].push_back(i);
    CMatrix out = CMatrix::Zero(n, n);
    for(const auto &[q, idx] : groups) {
        const CMatrix block = fill(static_cast<Eigen::Index>(idx.size()));
        for(std::size_t j = 0; j < idx.size(); ++j)
            for(std::size_t i = 0; i < idx.size(); ++i) out(idx[i], idx[j]) = block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return out;
}
} // namespace detail

/// Mixed state commuting with N: random sector weights times random
/// sector density matrices of random rank.
template<class G>
DensityOperator random_symmetric_state(const BasisHandle &basis, G &rng) {
    const RVector                            n = total_charge_diagonal(*basis);
    std::map<int, std::vector<Eigen::Index>> sectors;
    for(Eigen::Index i = 0; i < n.size(); ++i) sectors[static_cast<int>(n(i))].push_back(i);
    const auto weights = random_simplex(sectors.size(), rng);
    CMatrix    rho     = CMatrix::Zero(basis->size(), basis->size());
    std::size_t k      = 0;
    for(const auto &[q, idx] : sectors) {
        const auto dim = static_cast<Eigen::Index>(idx.size());
        std::uniform_int_distribution<Eigen::Index> rank(1, dim);
        const CMatrix block = random_wishart(dim, rank(rng), rng);
        for(std::size_t j = 0; j < idx.size(); ++j)
            for(std::size_t i = 0; i < idx.size(); ++i)
                rho(idx[i], idx[j]) = weights[k] * block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        ++k;
    }
    return {basis, linalg::hermitize(rho)};
}

/// Random state supported on the total-charge-N sector of a product basis.
template<class G>
DensityOperator random_fixed_charge_state(const BasisHandle &basis, int total_charge, G &rng) {
    auto sector = build_basis(basis->num_sites(), basis->statistics(), basis->per_site_cap(), total_charge);
    std::uniform_int_distribution<Eigen::Index> rank(1, sector->size());
    const CMatrix block = random_wishart(sector->size(), rank(rng), rng);
    return {basis, embed(block, *sector, *basis)};
}

/// Mixture of up to max_components products rho_A x rho_B with each factor
/// block diagonal in its local charge.
template<class G>
DensityOperator random_symmetric_separable(const BasisHandle &basis, const Bipartition &partition, G &rng,
                                           int max_components = 8) {
    const int  d  = basis->local_dimension();
    const auto qa = local_charges(partition.size_a(), d);
    const auto qb = local_charges(static_cast<int>(partition.b_sites().size()), d);
    std::uniform_int_distribution<int> count(1, max_components);
    const auto weights = random_simplex(static_cast<std::size_t>(count(rng)), rng);
    auto       local   = [&](Eigen::Index n) {
        std::uniform_int_distribution<Eigen::Index> rank(1, n);
        return CMatrix(random_wishart(n, rank(rng), rng) * std::uniform_real_distribution<double>(0.05, 1.0)(rng));
    };
    CMatrix rho = CMatrix::Zero(basis->size(), basis->size());
    for(double w : weights) {
        // Each factor gets random weights across its charge blocks.
        CMatrix a = detail::charge_block_matrix(qa, local);
        CMatrix b = detail::charge_block_matrix(qb, local);
        a /= a.trace().real();
        b /= b.trace().real();
        rho += w * local_product_operator(*basis, partition, a, b);
    }
    return {basis, linalg::hermitize(rho)};
}

/// U_A x U_B with each factor block diagonal in its local charge.
template<class G>
CMatrix random_symmetric_local_unitary(const OccupationBasis &basis, const Bipartition &partition, G &rng) {
    const int  d  = basis.local_dimension();
    const auto qa = local_charges(partition.size_a(), d);
    const auto qb = local_charges(static_cast<int>(partition.b_sites().size()), d);
    auto       u  = [&](Eigen::Index n) { return random_unitary(n, rng); };
    return local_product_operator(basis, partition, detail::charge_block_matrix(qa, u), detail::charge_block_matrix(qb, u));
}

} // namespace nument
