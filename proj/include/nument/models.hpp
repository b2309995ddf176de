#pragma once

// Many-body Hamiltonians (XXZ, tight-binding, interacting fermions, two-mode
// bosons), thermal states, and the fixed example states.
//
// Conventions: spin up = occupied site; open boundaries; J = 1 sets the energy
// unit for the XXZ chain, whose hopping is t = J/2.

#include "nument/hilbert.hpp"
#include "nument/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace nument {

struct Hamiltonian {
    BasisHandle basis;
    CMatrix     matrix;
};

inline constexpr int max_many_body_sites = 14;

/// c_i^dagger c_j (a_i^dagger a_j for bosons) in the given basis. Fermion
/// signs follow the site ordering of the occupation tuple.
inline CMatrix hopping_operator(const OccupationBasis &basis, int i, int j) {
    const int L = basis.num_sites();
    require(i >= 0 && i < L && j >= 0 && j < L, ErrorCode::invalid_argument, "hopping site out of range");
    CMatrix out = CMatrix::Zero(basis.size(), basis.size());
    for(std::size_t col = 0; col < basis.dimension(); ++col) {
        Occupation occ = basis.state(col);
        const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        if(occ[uj] == 0) continue;
        double amp  = std::sqrt(static_cast<double>(occ[uj]));
        int    sign = 1;
        if(basis.is_fermionic())
            for(int k = 0; k < j; ++k) sign *= (occ[static_cast<std::size_t>(k)] % 2 == 1) ? -1 : 1;
        occ[uj] -= 1;
        if(occ[ui] >= basis.per_site_cap()) continue;
        amp *= std::sqrt(static_cast<double>(occ[ui] + 1));
        if(basis.is_fermionic())
            for(int k = 0; k < i; ++k) sign *= (occ[static_cast<std::size_t>(k)] % 2 == 1) ? -1 : 1;
        occ[ui] += 1;
        auto row = basis.index_of(occ);
        if(!row) continue;
        out(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += sign * amp;
    }
    return out;
}

inline RVector occupation_diagonal(const OccupationBasis &basis, int site) {
    RVector d(basis.size());
    for(Eigen::Index k = 0; k < basis.size(); ++k) d(k) = basis.state(static_cast<std::size_t>(k))[static_cast<std::size_t>(site)];
    return d;
}

/// sum_ij h_ij c_i^dagger c_j.
inline CMatrix quadratic_operator(const OccupationBasis &basis, const CMatrix &h) {
    require(h.rows() == basis.num_sites() && h.cols() == basis.num_sites(), ErrorCode::invalid_argument,
            "single-particle matrix does not match number of sites");
    CMatrix out = CMatrix::Zero(basis.size(), basis.size());
    for(int i = 0; i < basis.num_sites(); ++i)
        for(int j = 0; j < basis.num_sites(); ++j)
            if(h(i, j) != cplx(0.0, 0.0)) out += h(i, j) * hopping_operator(basis, i, j);
    return out;
}

/// J sum (s^x s^x + s^y s^y + eta s^z s^z) on hard-core bosons.
inline Hamiltonian xxz_chain(int L, double J, double eta) {
    require(L >= 2, ErrorCode::invalid_argument, "XXZ chain needs L >= 2");
    auto    basis = build_basis(L, Statistics::hardcore);
    CMatrix h     = CMatrix::Zero(basis->size(), basis->size());
    for(int i = 0; i + 1 < L; ++i) {
        h += 0.5 * J * (hopping_operator(*basis, i, i + 1) + hopping_operator(*basis, i + 1, i));
        RVector sz = (occupation_diagonal(*basis, i).array() - 0.5) * (occupation_diagonal(*basis, i + 1).array() - 0.5);
        h += (J * eta * sz).cast<cplx>().asDiagonal();
    }
    return {basis, h};
}

/// Jordan-Wigner image of the XXZ chain on spinless fermions,
/// J sum [ (c^dag_{i+1} c_i + h.c.)/2 + (eta/4)(1 - 2 n_i)(1 - 2 n_{i+1}) ].
inline Hamiltonian jordan_wigner_xxz(int L, double J, double eta) {
    require(L >= 2, ErrorCode::invalid_argument, "XXZ chain needs L >= 2");
    auto    basis = build_basis(L, Statistics::fermion);
    CMatrix h     = CMatrix::Zero(basis->size(), basis->size());
    for(int i = 0; i + 1 < L; ++i) {
        h += 0.5 * J * (hopping_operator(*basis, i + 1, i) + hopping_operator(*basis, i, i + 1));
        RVector zz = (1.0 - 2.0 * occupation_diagonal(*basis, i).array()) * (1.0 - 2.0 * occupation_diagonal(*basis, i + 1).array());
        h += (0.25 * J * eta * zz).cast<cplx>().asDiagonal();
    }
    return {basis, h};
}

/// Single-particle hopping matrix of -t sum (c^dag_{i+1} c_i + h.c.), open chain.
inline RMatrix tight_binding_kernel(int L, double t) {
    require(L >= 2, ErrorCode::invalid_argument, "tight-binding chain needs L >= 2");
    RMatrix h = RMatrix::Zero(L, L);
    for(int i = 0; i + 1 < L; ++i) h(i, i + 1) = h(i + 1, i) = -t;
    return h;
}

/// -t sum (c^dag_{i+1} c_i + h.c.) + V sum n_i n_{i+1} on spinless fermions.
inline Hamiltonian interacting_chain(int L, double t, double V) {
    require(L >= 2, ErrorCode::invalid_argument, "chain needs L >= 2");
    require(L <= max_many_body_sites, ErrorCode::basis_too_large,
            "basis too large: many-body chain refused above L = " + std::to_string(max_many_body_sites) +
                " (use the Gaussian backend)");
    auto    basis = build_basis(L, Statistics::fermion);
    CMatrix h     = quadratic_operator(*basis, tight_binding_kernel(L, t).cast<cplx>());
    if(V != 0.0) {
        RVector nn = RVector::Zero(basis->size());
        for(int i = 0; i + 1 < L; ++i) nn.array() += occupation_diagonal(*basis, i).array() * occupation_diagonal(*basis, i + 1).array();
        h += (V * nn).cast<cplx>().asDiagonal();
    }
    return {basis, h};
}

inline Hamiltonian tight_binding(int L, double t) { return interacting_chain(L, t, 0.0); }

/// Charge-N block of (a1^dag a2^dag) [[-mu, t], [t, -mu]] (a1 a2)^T.
inline Hamiltonian two_mode_boson_sector(double mu, double t, int N) {
    require(N >= 1, ErrorCode::invalid_argument, "boson sector needs N >= 1");
    auto    basis = build_basis(2, Statistics::boson, N, N);
    CMatrix h     = t * (hopping_operator(*basis, 0, 1) + hopping_operator(*basis, 1, 0));
    h.diagonal().array() += -mu * N;
    return {basis, h};
}

/// e^{-beta H}/Z through the spectrum of H, shifted by the ground energy.
inline DensityOperator thermal_state(const Hamiltonian &H, double beta) {
    require(beta >= 0.0, ErrorCode::invalid_argument, "inverse temperature must be non-negative");
    const auto es = linalg::eigh(H.matrix);
    const double e0 = es.values.minCoeff();
    RVector      w(es.values.size());
    for(Eigen::Index k = 0; k < w.size(); ++k) {
        const double gap = es.values(k) - e0;
        if(std::isinf(beta)) w(k) = gap <= 1e-10 * std::max(1.0, std::abs(e0)) ? 1.0 : 0.0;
        else w(k) = std::exp(-beta * gap);
    }
    const double z = w.sum();
    require(std::isfinite(z) && z >= 1.0, ErrorCode::partition_function, "partition function underflow");
    CMatrix rho = es.vectors * (w / z).cast<cplx>().asDiagonal() * es.vectors.adjoint();
    return {H.basis, linalg::hermitize(rho), Check::none};
}

enum class StateTag { phi4, phi2, qd1, fermion4 };

inline StateTag parse_state_tag(std::string_view tag) {
    if(tag == "phi4") return StateTag::phi4;
    if(tag == "phi2") return StateTag::phi2;
    if(tag == "qd1") return StateTag::qd1;
    if(tag == "fermion4") return StateTag::fermion4;
    throw Error(ErrorCode::unknown_tag, "unknown state tag '" + std::string(tag) + "' (expected phi4, phi2, qd1, fermion4)");
}

inline std::string to_string(StateTag tag) {
    switch(tag) {
        case StateTag::phi4: return "phi4";
        case StateTag::phi2: return "phi2";
        case StateTag::qd1: return "qd1";
        case StateTag::fermion4: return "fermion4";
    }
    return "?";
}

/// Partition the example state is meant to be measured with.
inline Bipartition default_partition(StateTag tag) {
    switch(tag) {
        case StateTag::phi4: return Bipartition::prefix(4, 2);
        case StateTag::phi2: return {2, {1}};
        case StateTag::qd1: return Bipartition::prefix(2, 1);
        case StateTag::fermion4: return Bipartition::prefix(4, 2);
    }
    return Bipartition::prefix(2, 1);
}

namespace detail {
inline Eigen::Index at(const OccupationBasis &b, const Occupation &occ) { return static_cast<Eigen::Index>(b.index_of(occ).value()); }
} // namespace detail

/// phi4: (|0101> + |1010>)/sqrt2. phi2: |0>(|0> + |1>)/sqrt2.
/// qd1: (|00><00| + |11><11|)/4 + |psi_-><psi_-|/2.
/// fermion4: 1/4 on |0000>,|0011>,|1100>,|1111> with -1/4 coherence between |0011>,|1100>.
inline DensityOperator named_state(StateTag tag) {
    switch(tag) {
        case StateTag::phi4: {
            auto    b = build_basis(4, Statistics::hardcore);
            CVector v = CVector::Zero(b->size());
            v(detail::at(*b, {0, 1, 0, 1})) = 1.0;
            v(detail::at(*b, {1, 0, 1, 0})) = 1.0;
            return DensityOperator::from_pure(b, v);
        }
        case StateTag::phi2: {
            auto    b = build_basis(2, Statistics::hardcore);
            CVector v = CVector::Zero(b->size());
            v(detail::at(*b, {0, 0})) = 1.0;
            v(detail::at(*b, {0, 1})) = 1.0;
            return DensityOperator::from_pure(b, v);
        }
        case StateTag::qd1: {
            auto    b = build_basis(2, Statistics::hardcore);
            CMatrix m = CMatrix::Zero(4, 4);
            const auto i00 = detail::at(*b, {0, 0}), i01 = detail::at(*b, {0, 1});
            const auto i10 = detail::at(*b, {1, 0}), i11 = detail::at(*b, {1, 1});
            m(i00, i00) = m(i11, i11) = 0.25;
            m(i01, i01) = m(i10, i10) = 0.25;
            m(i01, i10) = m(i10, i01) = -0.25;
            return {b, m};
        }
        case StateTag::fermion4: {
            auto    b = build_basis(4, Statistics::fermion);
            CMatrix m = CMatrix::Zero(b->size(), b->size());
            const auto a = detail::at(*b, {0, 0, 0, 0}), c = detail::at(*b, {0, 0, 1, 1});
            const auto d = detail::at(*b, {1, 1, 0, 0}), e = detail::at(*b, {1, 1, 1, 1});
            m(a, a) = m(c, c) = m(d, d) = m(e, e) = 0.25;
            m(c, d) = m(d, c) = -0.25;
            return {b, m};
        }
    }
    throw Error(ErrorCode::unknown_tag, "unknown state tag");
}

} // namespace nument
