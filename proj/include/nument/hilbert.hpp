#pragma once

// Occupation-number bases, the A/B bipartition, density operators, and the
// charge projections built on them (subsystem-charge dephasing, its
// discrete-phase form, and total-charge sector extraction).

#include "nument/core.hpp"
#include "nument/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace nument {

enum class Statistics {
    hardcore, ///< spin-1/2 / hard-core bosons, occupations 0 or 1
    fermion,  ///< spinless fermions, occupations 0 or 1, Jordan-Wigner ordered by site
    boson,    ///< bosons with a per-site occupation cap
};

inline std::string to_string(Statistics s) {
    switch(s) {
        case Statistics::hardcore: return "hardcore";
        case Statistics::fermion: return "fermion";
        case Statistics::boson: return "boson";
    }
    return "?";
}

using Occupation = std::vector<int>;

/// Ordered list of occupation tuples. Ordering is lexicographic with site 0
/// most significant, so |01> precedes |10>, and matrices are reproducible.
class OccupationBasis {
  public:
    static constexpr std::size_t default_max_dimension = std::size_t{1} << 20;

    OccupationBasis(int num_sites, Statistics statistics, int per_site_cap = 1,
                    std::optional<int> fixed_total_charge = std::nullopt,
                    std::size_t max_dimension = default_max_dimension)
        : num_sites_(num_sites), statistics_(statistics), cap_(statistics == Statistics::boson ? per_site_cap : 1),
          fixed_(fixed_total_charge) {
        require(num_sites >= 1, ErrorCode::invalid_argument, "basis needs at least one site");
        require(cap_ >= 1, ErrorCode::invalid_argument, "boson per-site cap must be >= 1");
        require(!fixed_ || *fixed_ >= 0, ErrorCode::invalid_argument, "fixed total charge must be non-negative");
        require(static_cast<double>(num_sites) * std::log2(static_cast<double>(cap_ + 1)) < 62.0,
                ErrorCode::basis_too_large, "basis too large: occupation key does not fit 62 bits");

        const long double count = count_states();
        require(count <= static_cast<long double>(max_dimension), ErrorCode::basis_too_large,
                "basis too large: " + std::to_string(static_cast<double>(count)) + " states exceed cap of " +
                    std::to_string(max_dimension));

        states_.reserve(static_cast<std::size_t>(count));
        Occupation current(static_cast<std::size_t>(num_sites_), 0);
        enumerate(0, 0, current);
        index_.reserve(states_.size());
        for(std::size_t i = 0; i < states_.size(); ++i) index_.emplace(key(states_[i]), i);
    }

    [[nodiscard]] int num_sites() const { return num_sites_; }
    [[nodiscard]] Statistics statistics() const { return statistics_; }
    [[nodiscard]] int per_site_cap() const { return cap_; }
    [[nodiscard]] int local_dimension() const { return cap_ + 1; }
    [[nodiscard]] std::optional<int> fixed_total_charge() const { return fixed_; }
    [[nodiscard]] std::size_t dimension() const { return states_.size(); }
    [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(states_.size()); }
    [[nodiscard]] const Occupation &state(std::size_t i) const { return states_.at(i); }
    [[nodiscard]] const std::vector<Occupation> &states() const { return states_; }
    [[nodiscard]] bool is_fermionic() const { return statistics_ == Statistics::fermion; }
    [[nodiscard]] bool is_product() const { return !fixed_.has_value(); }

    [[nodiscard]] std::uint64_t key(const Occupation &occ) const {
        std::uint64_t k = 0;
        for(int n : occ) k = k * static_cast<std::uint64_t>(cap_ + 1) + static_cast<std::uint64_t>(n);
        return k;
    }

    [[nodiscard]] std::optional<std::size_t> index_of(const Occupation &occ) const {
        if(occ.size() != static_cast<std::size_t>(num_sites_)) return std::nullopt;
        for(int n : occ)
            if(n < 0 || n > cap_) return std::nullopt;
        auto it = index_.find(key(occ));
        if(it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// The full product space with the same sites, statistics and cap.
    [[nodiscard]] OccupationBasis unconstrained() const { return OccupationBasis(num_sites_, statistics_, cap_); }

    [[nodiscard]] bool same_space(const OccupationBasis &other) const {
        return num_sites_ == other.num_sites_ && statistics_ == other.statistics_ && cap_ == other.cap_ &&
               fixed_ == other.fixed_;
    }

  private:
    long double count_states() const {
        if(!fixed_) return std::pow(static_cast<long double>(cap_ + 1), num_sites_);
        // ways[n] = number of tuples over the sites seen so far summing to n
        const int target = *fixed_;
        std::vector<long double> ways(static_cast<std::size_t>(target) + 1, 0.0L);
        ways[0] = 1.0L;
        for(int s = 0; s < num_sites_; ++s) {
            std::vector<long double> next(ways.size(), 0.0L);
            for(int n = 0; n <= target; ++n)
                for(int k = 0; k <= cap_ && n + k <= target; ++k) next[static_cast<std::size_t>(n + k)] += ways[static_cast<std::size_t>(n)];
            ways = std::move(next);
        }
        return ways[static_cast<std::size_t>(target)];
    }

    void enumerate(int site, int used, Occupation &current) {
        if(site == num_sites_) {
            if(!fixed_ || used == *fixed_) states_.push_back(current);
            return;
        }
        const int remaining_sites = num_sites_ - site - 1;
        for(int n = 0; n <= cap_; ++n) {
            if(fixed_) {
                const int left = *fixed_ - used - n;
                if(left < 0) break;
                if(left > remaining_sites * cap_) continue;
            }
            current[static_cast<std::size_t>(site)] = n;
            enumerate(site + 1, used + n, current);
        }
        current[static_cast<std::size_t>(site)] = 0;
    }

    int                                             num_sites_;
    Statistics                                      statistics_;
    int                                             cap_;
    std::optional<int>                              fixed_;
    std::vector<Occupation>                         states_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

using BasisHandle = std::shared_ptr<const OccupationBasis>;

/// Bosons with a fixed total charge and no explicit cap get cap = N.
inline BasisHandle build_basis(int num_sites, Statistics statistics, std::optional<int> per_site_cap = std::nullopt,
                               std::optional<int> fixed_total_charge = std::nullopt,
                               std::size_t max_dimension = OccupationBasis::default_max_dimension) {
    int cap = 1;
    if(statistics == Statistics::boson) {
        require(per_site_cap.has_value() || fixed_total_charge.has_value(), ErrorCode::invalid_argument,
                "boson basis needs a per-site cap or a fixed total charge");
        cap = per_site_cap.value_or(std::max(1, fixed_total_charge.value_or(1)));
    }
    return std::make_shared<const OccupationBasis>(num_sites, statistics, cap, fixed_total_charge, max_dimension);
}

/// Site split into A and its complement B. Site indices are 0-based.
class Bipartition {
  public:
    Bipartition(int num_sites, std::vector<int> a_sites) : num_sites_(num_sites), a_sites_(std::move(a_sites)) {
        std::sort(a_sites_.begin(), a_sites_.end());
        require(!a_sites_.empty(), ErrorCode::invalid_argument, "subsystem A must be nonempty");
        require(std::adjacent_find(a_sites_.begin(), a_sites_.end()) == a_sites_.end(), ErrorCode::invalid_argument,
                "subsystem A lists a site twice");
        require(a_sites_.front() >= 0 && a_sites_.back() < num_sites, ErrorCode::invalid_argument,
                "subsystem A site out of range");
        require(static_cast<int>(a_sites_.size()) < num_sites, ErrorCode::invalid_argument,
                "subsystem A must be a strict subset of the sites");
        in_a_.assign(static_cast<std::size_t>(num_sites), false);
        for(int s : a_sites_) in_a_[static_cast<std::size_t>(s)] = true;
        for(int s = 0; s < num_sites; ++s)
            if(!in_a_[static_cast<std::size_t>(s)]) b_sites_.push_back(s);
    }

    /// Sites [0, size_a).
    static Bipartition prefix(int num_sites, int size_a) {
        std::vector<int> a(static_cast<std::size_t>(std::max(size_a, 0)));
        for(int i = 0; i < size_a; ++i) a[static_cast<std::size_t>(i)] = i;
        return {num_sites, std::move(a)};
    }

    /// A contiguous block of size_a sites in the middle of the chain.
    static Bipartition centered(int num_sites, int size_a) {
        const int start = (num_sites - size_a) / 2;
        std::vector<int> a(static_cast<std::size_t>(std::max(size_a, 0)));
        for(int i = 0; i < size_a; ++i) a[static_cast<std::size_t>(i)] = start + i;
        return {num_sites, std::move(a)};
    }

    [[nodiscard]] int num_sites() const { return num_sites_; }
    [[nodiscard]] int size_a() const { return static_cast<int>(a_sites_.size()); }
    [[nodiscard]] const std::vector<int> &a_sites() const { return a_sites_; }
    [[nodiscard]] const std::vector<int> &b_sites() const { return b_sites_; }
    [[nodiscard]] bool in_a(int site) const { return in_a_.at(static_cast<std::size_t>(site)); }
    [[nodiscard]] Bipartition swapped() const { return {num_sites_, b_sites_}; }
    [[nodiscard]] bool is_contiguous_prefix() const { return a_sites_.front() == 0 && a_sites_.back() == size_a() - 1; }

    [[nodiscard]] int charge_a(const Occupation &occ) const {
        int n = 0;
        for(int s : a_sites_) n += occ[static_cast<std::size_t>(s)];
        return n;
    }

  private:
    int               num_sites_;
    std::vector<int>  a_sites_;
    std::vector<int>  b_sites_;
    std::vector<bool> in_a_;
};

inline void require_compatible(const OccupationBasis &basis, const Bipartition &partition) {
    require(basis.num_sites() == partition.num_sites(), ErrorCode::invalid_argument,
            "bipartition has " + std::to_string(partition.num_sites()) + " sites but basis has " +
                std::to_string(basis.num_sites()));
}

/// Per-state total charge N and subsystem charge N_A.
struct ChargeMap {
    std::vector<int> total;
    std::vector<int> subsystem;
    int              capacity_a = 0;

    static ChargeMap compute(const OccupationBasis &basis, const Bipartition &partition) {
        require_compatible(basis, partition);
        ChargeMap map;
        map.capacity_a = partition.size_a() * basis.per_site_cap();
        map.total.reserve(basis.dimension());
        map.subsystem.reserve(basis.dimension());
        for(const auto &occ : basis.states()) {
            int n = 0;
            for(int v : occ) n += v;
            map.total.push_back(n);
            map.subsystem.push_back(partition.charge_a(occ));
        }
        return map;
    }

    [[nodiscard]] std::pair<int, int> subsystem_range() const {
        auto [lo, hi] = std::minmax_element(subsystem.begin(), subsystem.end());
        return {*lo, *hi};
    }
};

inline RVector total_charge_diagonal(const OccupationBasis &basis) {
    RVector d(basis.size());
    for(Eigen::Index i = 0; i < basis.size(); ++i) {
        int n = 0;
        for(int v : basis.state(static_cast<std::size_t>(i))) n += v;
        d(i) = n;
    }
    return d;
}

inline RVector subsystem_charge_diagonal(const OccupationBasis &basis, const Bipartition &partition) {
    require_compatible(basis, partition);
    RVector d(basis.size());
    for(Eigen::Index i = 0; i < basis.size(); ++i) d(i) = partition.charge_a(basis.state(static_cast<std::size_t>(i)));
    return d;
}

inline CMatrix total_charge_operator(const OccupationBasis &basis) {
    return total_charge_diagonal(basis).cast<cplx>().asDiagonal();
}

/// N_A as a diagonal matrix in the occupation basis.
inline CMatrix subsystem_charge_operator(const OccupationBasis &basis, const Bipartition &partition) {
    return subsystem_charge_diagonal(basis, partition).cast<cplx>().asDiagonal();
}

/// max |[M, N]| elementwise.
inline double charge_commutator_norm(const CMatrix &m, const OccupationBasis &basis) {
    return linalg::max_abs(linalg::commutator_with_diagonal(m, total_charge_diagonal(basis)));
}

enum class Check { full, none };

/// Dense density matrix tied to an occupation basis. Immutable.
class DensityOperator {
  public:
    static constexpr double hermiticity_tolerance = 1e-10;
    static constexpr double trace_tolerance       = 1e-10;
    static constexpr double psd_tolerance         = 1e-10;

    DensityOperator(BasisHandle basis, CMatrix matrix, Check check = Check::full)
        : basis_(std::move(basis)), matrix_(std::move(matrix)) {
        require(basis_ != nullptr, ErrorCode::invalid_argument, "density operator needs a basis");
        require(matrix_.rows() == basis_->size() && matrix_.cols() == basis_->size(), ErrorCode::invalid_argument,
                "density matrix shape does not match basis dimension");
        if(check == Check::full) validate();
    }

    static DensityOperator from_pure(BasisHandle basis, const CVector &psi) {
        require(psi.size() == basis->size(), ErrorCode::invalid_argument, "state vector does not match basis");
        const double norm = psi.norm();
        require(norm > 0.0, ErrorCode::invalid_argument, "zero state vector");
        CVector v = psi / norm;
        return {std::move(basis), v * v.adjoint()};
    }

    [[nodiscard]] const OccupationBasis &basis() const { return *basis_; }
    [[nodiscard]] const BasisHandle &basis_handle() const { return basis_; }
    [[nodiscard]] const CMatrix &matrix() const { return matrix_; }
    [[nodiscard]] Eigen::Index dimension() const { return matrix_.rows(); }
    [[nodiscard]] double trace() const { return matrix_.trace().real(); }

    [[nodiscard]] RVector eigenvalues() const { return linalg::eigvalsh(matrix_); }

    [[nodiscard]] double charge_commutator_norm() const { return nument::charge_commutator_norm(matrix_, *basis_); }

    void validate() const {
        const double herm = linalg::hermiticity_defect(matrix_);
        require(herm <= hermiticity_tolerance, ErrorCode::invalid_argument,
                "density matrix not hermitian (defect " + std::to_string(herm) + ")");
        const double tr = std::abs(matrix_.trace() - cplx(1.0, 0.0));
        require(tr <= trace_tolerance, ErrorCode::invalid_argument,
                "density matrix trace differs from 1 by " + std::to_string(tr));
        const double lo = eigenvalues().minCoeff();
        require(lo >= -psd_tolerance, ErrorCode::psd_violation,
                "density matrix has eigenvalue " + std::to_string(lo));
    }

  private:
    BasisHandle basis_;
    CMatrix     matrix_;
};

/// rho_m = sum_{N_A} Pi(N_A) rho Pi(N_A): every element between states with
/// different subsystem charge is set to exactly zero.
inline DensityOperator project_subsystem_charge(const DensityOperator &rho, const Bipartition &partition) {
    const auto &basis = rho.basis();
    require_compatible(basis, partition);
    std::vector<int> na(basis.dimension());
    for(std::size_t i = 0; i < na.size(); ++i) na[i] = partition.charge_a(basis.state(i));
    CMatrix out = rho.matrix();
    for(Eigen::Index j = 0; j < out.cols(); ++j)
        for(Eigen::Index i = 0; i < out.rows(); ++i)
            if(na[static_cast<std::size_t>(i)] != na[static_cast<std::size_t>(j)]) out(i, j) = 0.0;
    return {rho.basis_handle(), std::move(out), Check::none};
}

/// Joint measurement of several subsystem charges (one per flavor): elements
/// survive only when every listed charge agrees between row and column.
inline DensityOperator project_subsystem_charges(const DensityOperator &rho, std::span<const Bipartition> partitions) {
    const auto &basis = rho.basis();
    CMatrix     out   = rho.matrix();
    for(const auto &p : partitions) require_compatible(basis, p);
    for(Eigen::Index j = 0; j < out.cols(); ++j) {
        const auto &cj = basis.state(static_cast<std::size_t>(j));
        for(Eigen::Index i = 0; i < out.rows(); ++i) {
            const auto &ci = basis.state(static_cast<std::size_t>(i));
            for(const auto &p : partitions)
                if(p.charge_a(ci) != p.charge_a(cj)) {
                    out(i, j) = 0.0;
                    break;
                }
        }
    }
    return {rho.basis_handle(), std::move(out), Check::none};
}

/// Discrete form of the phase average (1/M) sum_k e^{i a_k N_A} rho e^{-i a_k N_A}
/// with a_k = 2 pi k / M - pi. Exact for integer charges once M exceeds the
/// spread max N_A - min N_A; smaller M folds charge differences together.
inline DensityOperator phase_average(const DensityOperator &rho, const Bipartition &partition,
                                     std::optional<int> num_phases = std::nullopt) {
    const auto &basis = rho.basis();
    const auto  map   = ChargeMap::compute(basis, partition);
    const auto [lo, hi] = map.subsystem_range();
    const int M = num_phases.value_or(map.capacity_a + 1);
    require(M >= 1, ErrorCode::invalid_argument, "number of phases must be positive");
    require(M > hi - lo, ErrorCode::aliasing,
            "aliasing: " + std::to_string(M) + " phases cannot resolve subsystem charge spread " + std::to_string(hi - lo));

    const RVector na = subsystem_charge_diagonal(basis, partition);
    CMatrix       acc = CMatrix::Zero(rho.dimension(), rho.dimension());
    for(int k = 0; k < M; ++k) {
        const double alpha = 2.0 * pi * k / M - pi;
        CVector      phase = (cplx(0.0, alpha) * na.cast<cplx>()).array().exp().matrix();
        acc += phase.asDiagonal() * rho.matrix() * phase.conjugate().asDiagonal();
    }
    acc /= static_cast<double>(M);
    return {rho.basis_handle(), std::move(acc), Check::none};
}

inline std::vector<int> total_charges(const OccupationBasis &basis) {
    std::set<int> seen;
    for(const auto &occ : basis.states()) {
        int n = 0;
        for(int v : occ) n += v;
        seen.insert(n);
    }
    return {seen.begin(), seen.end()};
}

/// Copies a matrix written in basis `from` into basis `into`, mapping states by
/// occupation tuple. States of `from` missing in `into` are an error.
inline CMatrix embed(const CMatrix &m, const OccupationBasis &from, const OccupationBasis &into) {
    require(from.num_sites() == into.num_sites() && from.statistics() == into.statistics(), ErrorCode::invalid_argument,
            "embedding between incompatible bases");
    std::vector<Eigen::Index> map(from.dimension());
    for(std::size_t i = 0; i < from.dimension(); ++i) {
        auto idx = into.index_of(from.state(i));
        require(idx.has_value(), ErrorCode::invalid_argument, "state missing from target basis");
        map[i] = static_cast<Eigen::Index>(*idx);
    }
    CMatrix out = CMatrix::Zero(into.size(), into.size());
    for(Eigen::Index j = 0; j < m.cols(); ++j)
        for(Eigen::Index i = 0; i < m.rows(); ++i) out(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = m(i, j);
    return out;
}

inline CVector embed(const CVector &v, const OccupationBasis &from, const OccupationBasis &into) {
    CVector out = CVector::Zero(into.size());
    for(std::size_t i = 0; i < from.dimension(); ++i) {
        auto idx = into.index_of(from.state(i));
        require(idx.has_value(), ErrorCode::invalid_argument, "state missing from target basis");
        out(static_cast<Eigen::Index>(*idx)) = v(static_cast<Eigen::Index>(i));
    }
    return out;
}

struct SectorState {
    int             total_charge;
    double          probability;
    DensityOperator state; ///< normalized, written in the fixed-N sub-basis
};

inline constexpr double empty_sector_threshold = 1e-14;

/// Pi(N) rho Pi(N), normalized on the charge-N sub-basis.
inline SectorState project_total_charge(const DensityOperator &rho, int total_charge) {
    const auto &basis = rho.basis();
    require(!basis.fixed_total_charge() || *basis.fixed_total_charge() == total_charge, ErrorCode::empty_sector,
            "empty sector: basis is fixed to a different total charge");
    auto sector = std::make_shared<const OccupationBasis>(basis.num_sites(), basis.statistics(), basis.per_site_cap(),
                                                          total_charge);
    std::vector<Eigen::Index> rows;
    rows.reserve(sector->dimension());
    for(const auto &occ : sector->states()) {
        auto idx = basis.index_of(occ);
        require(idx.has_value(), ErrorCode::empty_sector, "empty sector: state not present in basis");
        rows.push_back(static_cast<Eigen::Index>(*idx));
    }
    CMatrix block(sector->size(), sector->size());
    for(Eigen::Index j = 0; j < block.cols(); ++j)
        for(Eigen::Index i = 0; i < block.rows(); ++i) block(i, j) = rho.matrix()(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
    const double p = block.trace().real();
    require(p >= empty_sector_threshold, ErrorCode::empty_sector,
            "empty sector: N = " + std::to_string(total_charge) + " has probability " + std::to_string(p));
    block /= p;
    return {total_charge, p, DensityOperator(std::move(sector), linalg::hermitize(block), Check::none)};
}

/// All sectors with probability above the empty-sector threshold.
inline std::vector<SectorState> total_charge_sectors(const DensityOperator &rho) {
    std::vector<SectorState> out;
    const RVector            n = total_charge_diagonal(rho.basis());
    for(int charge : total_charges(rho.basis())) {
        double p = 0.0;
        for(Eigen::Index i = 0; i < n.size(); ++i)
            if(static_cast<int>(n(i)) == charge) p += rho.matrix()(i, i).real();
        if(p < empty_sector_threshold) continue;
        out.push_back(project_total_charge(rho, charge));
    }
    return out;
}

} // namespace nument
