#pragma once

// Partial transposes (bosonic and fermionic), logarithmic negativity, and the
// per-total-charge sector negativity table.

#include "nument/entropy.hpp"
#include "nument/hilbert.hpp"
#include "nument/linalg.hpp"

#include <cmath>
#include <vector>

namespace nument {

enum class TransposeFlavor { bosonic, fermionic };

struct PartialTransposeResult {
    CMatrix         op;
    TransposeFlavor flavor;
    BasisHandle     basis; ///< always the unconstrained product basis
};

namespace detail {

/// Index bookkeeping for swapping A-occupations between a ket and a bra in a
/// product basis.
struct ProductIndex {
    std::vector<std::size_t>              a_key, b_key;   // per full-basis state
    std::vector<std::vector<Eigen::Index>> compose;        // [a_key][b_key] -> full index
    std::vector<int>                      charge_a, charge_b;

    ProductIndex(const OccupationBasis &full, const Bipartition &partition) {
        const std::size_t base = static_cast<std::size_t>(full.local_dimension());
        std::size_t       dim_a = 1, dim_b = 1;
        for(std::size_t k = 0; k < partition.a_sites().size(); ++k) dim_a *= base;
        for(std::size_t k = 0; k < partition.b_sites().size(); ++k) dim_b *= base;
        compose.assign(dim_a, std::vector<Eigen::Index>(dim_b, -1));
        for(std::size_t i = 0; i < full.dimension(); ++i) {
            const auto &occ = full.state(i);
            std::size_t ka = 0, kb = 0;
            int         na = 0, nb = 0;
            for(int s : partition.a_sites()) {
                ka = ka * base + static_cast<std::size_t>(occ[static_cast<std::size_t>(s)]);
                na += occ[static_cast<std::size_t>(s)];
            }
            for(int s : partition.b_sites()) {
                kb = kb * base + static_cast<std::size_t>(occ[static_cast<std::size_t>(s)]);
                nb += occ[static_cast<std::size_t>(s)];
            }
            a_key.push_back(ka);
            b_key.push_back(kb);
            charge_a.push_back(na);
            charge_b.push_back(nb);
            compose[ka][kb] = static_cast<Eigen::Index>(i);
        }
    }
};

inline std::pair<BasisHandle, CMatrix> to_product_basis(const DensityOperator &rho) {
    if(rho.basis().is_product()) return {rho.basis_handle(), rho.matrix()};
    auto full = std::make_shared<const OccupationBasis>(rho.basis().unconstrained());
    return {full, embed(rho.matrix(), rho.basis(), *full)};
}

template<class Phase>
PartialTransposeResult transpose_a(const DensityOperator &rho, const Bipartition &partition, TransposeFlavor flavor,
                                   Phase &&phase) {
    require_compatible(rho.basis(), partition);
    auto [full, m] = to_product_basis(rho);
    const ProductIndex idx(*full, partition);
    CMatrix            out = CMatrix::Zero(m.rows(), m.cols());
    for(Eigen::Index j = 0; j < m.cols(); ++j)
        for(Eigen::Index i = 0; i < m.rows(); ++i) {
            const cplx v = m(i, j);
            if(v == cplx(0.0, 0.0)) continue;
            const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            // |a_i b_i><a_j b_j| -> |a_j b_i><a_i b_j|
            const Eigen::Index row = idx.compose[idx.a_key[uj]][idx.b_key[ui]];
            const Eigen::Index col = idx.compose[idx.a_key[ui]][idx.b_key[uj]];
            out(row, col) = v * phase(idx.charge_a[ui], idx.charge_a[uj], idx.charge_b[ui], idx.charge_b[uj]);
        }
    return {std::move(out), flavor, full};
}

} // namespace detail

/// rho^{T_A}: transpose of the A factor in the occupation basis.
inline PartialTransposeResult partial_transpose(const DensityOperator &rho, const Bipartition &partition) {
    return detail::transpose_a(rho, partition, TransposeFlavor::bosonic,
                               [](int, int, int, int) { return cplx(1.0, 0.0); });
}

/// log ||rho^{T_A}||_1 = log(1 + 2 sum |negative eigenvalues|). The transpose
/// has unit trace, so this equals the trace-norm form, and a positive
/// transpose gives exactly 0.
inline double log_negativity(const DensityOperator &rho, const Bipartition &partition) {
    const auto pt = partial_transpose(rho, partition);
    double     negative = 0.0;
    for(double v : linalg::eigvalsh(pt.op))
        if(v < 0.0) negative -= v;
    return std::log1p(2.0 * negative);
}

/// Fermionic partial transpose for A a contiguous prefix of the mode ordering.
///
/// Each term picks up (-i)^{(t_A + t'_A) mod 2} (-1)^{(t_A + t'_A)(t_B + t'_B)},
/// with t_X the occupation sums of the ket and t'_X those of the bra. The -i
/// branch of the square root reproduces the -i e^{beta eta/4} sinh(beta/2)
/// corner entries of the two-site XXZ/fermion thermal state.
inline PartialTransposeResult fermionic_partial_transpose(const DensityOperator &rho, const Bipartition &partition) {
    require(rho.basis().is_fermionic(), ErrorCode::invalid_argument, "fermionic partial transpose needs a fermion basis");
    require(partition.is_contiguous_prefix(), ErrorCode::unsupported_layout,
            "unsupported layout: fermionic partial transpose needs A to be a contiguous prefix of the sites");
    return detail::transpose_a(rho, partition, TransposeFlavor::fermionic, [](int ta, int ta_bar, int tb, int tb_bar) {
        const int sa = ta + ta_bar;
        const int sb = tb + tb_bar;
        cplx      f  = (sa % 2 == 1) ? cplx(0.0, -1.0) : cplx(1.0, 0.0);
        if((sa * sb) % 2 == 1) f = -f;
        return f;
    });
}

/// ln Tr sqrt(R R^dagger) with R the fermionic partial transpose.
inline double fermionic_negativity(const DensityOperator &rho, const Bipartition &partition) {
    const auto rt = fermionic_partial_transpose(rho, partition);
    return std::max(std::log(linalg::trace_norm(rt.op)), 0.0);
}

struct SectorNegativityRow {
    int    total_charge;
    double probability;
    double log_negativity;
};

struct SectorNegativityTable {
    std::vector<SectorNegativityRow> rows;

    [[nodiscard]] double max_log_negativity() const {
        double m = 0.0;
        for(const auto &r : rows) m = std::max(m, r.log_negativity);
        return m;
    }
    [[nodiscard]] double total_probability() const {
        double s = 0.0;
        for(const auto &r : rows) s += r.probability;
        return s;
    }
};

/// Log-negativity of every nonempty normalized total-charge block.
inline SectorNegativityTable sector_negativities(const DensityOperator &rho, const Bipartition &partition) {
    SectorNegativityTable table;
    for(const auto &sector : total_charge_sectors(rho))
        table.rows.push_back({sector.total_charge, sector.probability, log_negativity(sector.state, partition)});
    return table;
}

/// rho = rho_d + rho_o, split by whether row and column share N_A.
struct SubsystemBlockSplit {
    CMatrix diagonal;
    CMatrix off_diagonal;
};

inline SubsystemBlockSplit split_subsystem_blocks(const DensityOperator &rho, const Bipartition &partition) {
    const auto &basis = rho.basis();
    require_compatible(basis, partition);
    SubsystemBlockSplit split{rho.matrix(), CMatrix::Zero(rho.dimension(), rho.dimension())};
    for(Eigen::Index j = 0; j < rho.dimension(); ++j)
        for(Eigen::Index i = 0; i < rho.dimension(); ++i)
            if(partition.charge_a(basis.state(static_cast<std::size_t>(i))) !=
               partition.charge_a(basis.state(static_cast<std::size_t>(j)))) {
                split.off_diagonal(i, j) = split.diagonal(i, j);
                split.diagonal(i, j)     = 0.0;
            }
    return split;
}

/// Partial transpose of a bare matrix (no density-operator invariants), used
/// for rho_d and rho_o separately.
inline CMatrix partial_transpose_matrix(const CMatrix &m, BasisHandle basis, const Bipartition &partition) {
    DensityOperator wrapper(std::move(basis), m, Check::none);
    return partial_transpose(wrapper, partition).op;
}

} // namespace nument
