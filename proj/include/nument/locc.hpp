#pragma once

// Symmetric LOCC channels K(rho) = sum_n K_n rho K_n^dagger: validation of
// completeness, product form, charge symmetry and grading, application, and
// the monotonicity check for Delta S_m.

#include "nument/entropy.hpp"
#include "nument/hilbert.hpp"
#include "nument/linalg.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace nument {

inline constexpr double channel_tolerance = 1e-10;

/// Occupation tuples of a set of sites, in the same lexicographic order the
/// full basis uses; the i-th entry is the local basis state i.
inline std::vector<Occupation> local_states(int num_local_sites, int local_dimension) {
    OccupationBasis local(num_local_sites, local_dimension == 2 ? Statistics::hardcore : Statistics::boson,
                          local_dimension - 1);
    return local.states();
}

inline std::vector<int> local_charges(int num_local_sites, int local_dimension) {
    std::vector<int> q;
    for(const auto &occ : local_states(num_local_sites, local_dimension)) {
        int n = 0;
        for(int v : occ) n += v;
        q.push_back(n);
    }
    return q;
}

/// a (acting on the A sites) times b (acting on the B sites), written in the
/// full product basis. No fermionic reordering signs are applied.
inline CMatrix local_product_operator(const OccupationBasis &basis, const Bipartition &partition, const CMatrix &a,
                                      const CMatrix &b) {
    require(basis.is_product(), ErrorCode::invalid_argument, "product operators need a product basis");
    require_compatible(basis, partition);
    const std::size_t base = static_cast<std::size_t>(basis.local_dimension());
    auto key = [&](const Occupation &occ, const std::vector<int> &sites) {
        std::size_t k = 0;
        for(int s : sites) k = k * base + static_cast<std::size_t>(occ[static_cast<std::size_t>(s)]);
        return static_cast<Eigen::Index>(k);
    };
    std::vector<Eigen::Index> ka, kb;
    for(const auto &occ : basis.states()) {
        ka.push_back(key(occ, partition.a_sites()));
        kb.push_back(key(occ, partition.b_sites()));
    }
    require(a.rows() == static_cast<Eigen::Index>(std::pow(base, partition.a_sites().size())) && a.cols() == a.rows(),
            ErrorCode::invalid_argument, "A factor has wrong dimension");
    require(b.rows() == static_cast<Eigen::Index>(std::pow(base, partition.b_sites().size())) && b.cols() == b.rows(),
            ErrorCode::invalid_argument, "B factor has wrong dimension");
    CMatrix out(basis.size(), basis.size());
    for(Eigen::Index j = 0; j < basis.size(); ++j)
        for(Eigen::Index i = 0; i < basis.size(); ++i)
            out(i, j) = a(ka[static_cast<std::size_t>(i)], ka[static_cast<std::size_t>(j)]) * b(kb[static_cast<std::size_t>(i)], kb[static_cast<std::size_t>(j)]);
    return out;
}

struct KrausOperator {
    CMatrix                              matrix;
    std::optional<std::pair<CMatrix, CMatrix>> factors; ///< declared (A, B) factors
    std::optional<int>                   grade;   ///< declared delta_n in [K_n, N_A] = delta_n K_n
};

struct KrausChannel {
    std::vector<KrausOperator> ops;
};

struct ConditionFailure {
    std::string                condition; ///< "completeness", "product", "symmetry", "grading"
    std::optional<std::size_t> op;
    double                     residual;
};

struct ChannelReport {
    double                             completeness_residual = 0.0;
    std::vector<double>                symmetry_residuals;
    std::vector<std::optional<double>> product_residuals;
    std::vector<std::optional<double>> grading_residuals;
    std::vector<std::optional<int>>    inferred_grades; ///< nullopt when K_n mixes several charge shifts
    std::vector<ConditionFailure>      failures;

    [[nodiscard]] bool complete() const { return completeness_residual <= channel_tolerance; }
    [[nodiscard]] bool symmetric() const {
        for(double r : symmetry_residuals)
            if(r > channel_tolerance) return false;
        return true;
    }
    [[nodiscard]] bool valid() const { return failures.empty(); }
};

/// The unique delta with [K, N_A] = delta K, if one exists.
inline std::optional<int> infer_grade(const CMatrix &k, const RVector &na) {
    std::optional<int> grade;
    for(Eigen::Index j = 0; j < k.cols(); ++j)
        for(Eigen::Index i = 0; i < k.rows(); ++i) {
            if(std::abs(k(i, j)) <= channel_tolerance) continue;
            const int d = static_cast<int>(std::lround(na(j) - na(i)));
            if(grade && *grade != d) return std::nullopt;
            grade = d;
        }
    return grade.value_or(0);
}

inline ChannelReport validate_channel(const KrausChannel &channel, const OccupationBasis &basis,
                                      const Bipartition &partition) {
    require_compatible(basis, partition);
    ChannelReport report;
    const auto    dim = basis.size();
    CMatrix       completeness = -CMatrix::Identity(dim, dim);
    const RVector n  = total_charge_diagonal(basis);
    const RVector na = subsystem_charge_diagonal(basis, partition);
    for(std::size_t idx = 0; idx < channel.ops.size(); ++idx) {
        const auto &op = channel.ops[idx];
        require(op.matrix.rows() == dim && op.matrix.cols() == dim, ErrorCode::invalid_argument,
                "Kraus operator " + std::to_string(idx) + " does not match basis dimension");
        completeness += op.matrix.adjoint() * op.matrix;

        const double sym = linalg::max_abs(linalg::commutator_with_diagonal(op.matrix, n));
        report.symmetry_residuals.push_back(sym);
        if(sym > channel_tolerance) report.failures.push_back({"symmetry", idx, sym});

        if(op.factors) {
            const double prod =
                linalg::max_abs(op.matrix - local_product_operator(basis, partition, op.factors->first, op.factors->second));
            report.product_residuals.emplace_back(prod);
            if(prod > channel_tolerance) report.failures.push_back({"product", idx, prod});
        } else {
            report.product_residuals.emplace_back(std::nullopt);
        }

        report.inferred_grades.push_back(infer_grade(op.matrix, na));
        if(op.grade) {
            const CMatrix lhs = linalg::commutator_with_diagonal(op.matrix, na);
            const double  res = linalg::max_abs(lhs - static_cast<double>(*op.grade) * op.matrix);
            report.grading_residuals.emplace_back(res);
            if(res > channel_tolerance) report.failures.push_back({"grading", idx, res});
        } else {
            report.grading_residuals.emplace_back(std::nullopt);
        }
    }
    report.completeness_residual = linalg::max_abs(completeness);
    if(!report.complete()) report.failures.push_back({"completeness", std::nullopt, report.completeness_residual});
    return report;
}

inline double completeness_residual(const KrausChannel &channel, Eigen::Index dim) {
    CMatrix acc = -CMatrix::Identity(dim, dim);
    for(const auto &op : channel.ops) acc += op.matrix.adjoint() * op.matrix;
    return linalg::max_abs(acc);
}

inline CMatrix apply_channel(const CMatrix &rho, const KrausChannel &channel) {
    CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
    for(const auto &op : channel.ops) out.noalias() += op.matrix * rho * op.matrix.adjoint();
    return linalg::hermitize(out);
}

inline DensityOperator apply_channel(const DensityOperator &rho, const KrausChannel &channel) {
    const double res = completeness_residual(channel, rho.dimension());
    require(res <= channel_tolerance, ErrorCode::incomplete_channel,
            "incomplete channel: sum K^dagger K deviates from identity by " + std::to_string(res));
    return {rho.basis_handle(), apply_channel(rho.matrix(), channel), Check::none};
}

/// max | sum Pi K(rho) Pi - K(sum Pi rho Pi) |.
inline double measurement_commutes_with_channel(const DensityOperator &rho, const KrausChannel &channel,
                                                const Bipartition &partition) {
    const DensityOperator after       = apply_channel(rho, channel);
    const CMatrix         measure_last = project_subsystem_charge(after, partition).matrix();
    const CMatrix         measure_first = apply_channel(project_subsystem_charge(rho, partition).matrix(), channel);
    return linalg::max_abs(measure_last - measure_first);
}

struct MonotonicityResult {
    double before;
    double after;
    bool   non_increasing;
};

inline constexpr double monotonicity_tolerance = 1e-9;

inline MonotonicityResult monotonicity_check(const DensityOperator &rho, const KrausChannel &channel,
                                             const Bipartition &partition) {
    const double before = number_entanglement(rho, partition).delta_s_m;
    const double after  = number_entanglement(apply_channel(rho, channel), partition).delta_s_m;
    return {before, after, after <= before + monotonicity_tolerance};
}

inline KrausChannel identity_channel(const OccupationBasis &basis) {
    return {{KrausOperator{CMatrix::Identity(basis.size(), basis.size()), std::nullopt, 0}}};
}

/// Kraus operators Pi(N_A): the unselective subsystem-charge measurement.
inline KrausChannel dephasing_channel(const OccupationBasis &basis, const Bipartition &partition) {
    const auto   map = ChargeMap::compute(basis, partition);
    const auto [lo, hi] = map.subsystem_range();
    KrausChannel ch;
    for(int q = lo; q <= hi; ++q) {
        CMatrix p = CMatrix::Zero(basis.size(), basis.size());
        for(std::size_t i = 0; i < basis.dimension(); ++i)
            if(map.subsystem[i] == q) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        ch.ops.push_back({p, std::nullopt, 0});
    }
    return ch;
}

/// Two-site channel that classically randomizes which site holds a single
/// particle: K_1..K_4 = {|10><10|, |01><01|, |10><01|, |01><10|}/sqrt2.
/// These four are complete only on the one-particle sector; K_5 = |00><00|
/// and K_6 = |11><11| complete them on the full space without touching it.
inline KrausChannel exchange_channel() {
    const double s = 1.0 / std::sqrt(2.0);
    auto basis     = build_basis(2, Statistics::hardcore);
    const Bipartition split = Bipartition::prefix(2, 1);
    auto ket_bra = [](int r, int c) {
        CMatrix m = CMatrix::Zero(2, 2);
        m(r, c)   = 1.0;
        return m;
    };
    // factors: (A: site 0) x (B: site 1)
    const std::vector<std::pair<CMatrix, CMatrix>> factors{
        {s * ket_bra(1, 1), ket_bra(0, 0)}, {s * ket_bra(0, 0), ket_bra(1, 1)}, {s * ket_bra(1, 0), ket_bra(0, 1)},
        {s * ket_bra(0, 1), ket_bra(1, 0)}, {ket_bra(0, 0), ket_bra(0, 0)},     {ket_bra(1, 1), ket_bra(1, 1)},
    };
    KrausChannel ch;
    for(const auto &f : factors) ch.ops.push_back({local_product_operator(*basis, split, f.first, f.second), f, std::nullopt});
    return ch;
}

/// Random channel whose operators are products K^A x K^B that shift N_A by a
/// fixed grade and N_B by its negative, completed by sqrt(I - sum K^dag K).
template<class Rng>
KrausChannel random_graded_channel(const OccupationBasis &basis, const Bipartition &partition, Rng &rng,
                                   int num_operators = 3) {
    require(basis.is_product(), ErrorCode::invalid_argument, "random channels need a product basis");
    const int d = basis.local_dimension();
    const auto qa = local_charges(partition.size_a(), d);
    const auto qb = local_charges(static_cast<int>(partition.b_sites().size()), d);
    std::normal_distribution<double>   gauss(0.0, 1.0);
    std::uniform_int_distribution<int> shift(-1, 1);

    auto random_shift_matrix = [&](const std::vector<int> &q, int delta) {
        const auto n = static_cast<Eigen::Index>(q.size());
        CMatrix    m = CMatrix::Zero(n, n);
        for(Eigen::Index j = 0; j < n; ++j)
            for(Eigen::Index i = 0; i < n; ++i)
                if(q[static_cast<std::size_t>(i)] == q[static_cast<std::size_t>(j)] + delta) m(i, j) = cplx(gauss(rng), gauss(rng));
        return m;
    };

    KrausChannel ch;
    while(static_cast<int>(ch.ops.size()) < num_operators) {
        const int grade = shift(rng);
        // K^A lowers N_A by grade, K^B raises N_B by grade.
        CMatrix a = random_shift_matrix(qa, -grade);
        CMatrix b = random_shift_matrix(qb, grade);
        if(a.norm() == 0.0 || b.norm() == 0.0) continue;
        CMatrix k = local_product_operator(basis, partition, a, b);
        ch.ops.push_back({k, std::make_pair(a, b), grade});
    }

    CMatrix s = CMatrix::Zero(basis.size(), basis.size());
    for(const auto &op : ch.ops) s += op.matrix.adjoint() * op.matrix;
    const double top   = linalg::eigvalsh(s).maxCoeff();
    const double scale = 1.0 / std::sqrt(top * (1.0 + std::uniform_real_distribution<double>(0.05, 1.0)(rng)));
    for(auto &op : ch.ops) {
        op.matrix *= scale;
        op.factors->first *= scale;
    }
    s *= scale * scale;
    CMatrix rest = linalg::hermitian_function(CMatrix(CMatrix::Identity(basis.size(), basis.size()) - s),
                                              [](double x) { return std::sqrt(std::max(x, 0.0)); });
    ch.ops.push_back({rest, std::nullopt, 0});
    return ch;
}

} // namespace nument
