#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's basis, Hamiltonian or entropy code: many-body operators are built
// from bit strings, closed forms are typed in directly.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx    = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

/// Thermal XXZ two-site state times Z, rows/cols |00>,|01>,|10>,|11>.
inline RMatrix xxz_two_site_unnormalized(double beta, double eta) {
    RMatrix m       = RMatrix::Zero(4, 4);
    const double e  = std::exp(beta * eta / 4.0);
    m(0, 0) = m(3, 3) = 1.0 / e;
    m(1, 1) = m(2, 2) = e * std::cosh(beta / 2.0);
    m(1, 2) = m(2, 1) = -e * std::sinh(beta / 2.0);
    return m;
}

/// Fermionic partial transpose (A = first site) of the same state, times Z.
inline CMatrix xxz_fermionic_pt_unnormalized(double beta, double eta) {
    CMatrix      m = CMatrix::Zero(4, 4);
    const double e = std::exp(beta * eta / 4.0);
    m(0, 0) = m(3, 3) = 1.0 / e;
    m(1, 1) = m(2, 2) = e * std::cosh(beta / 2.0);
    m(0, 3) = m(3, 0) = cplx(0.0, -e * std::sinh(beta / 2.0));
    return m;
}

/// Eigenvalues of the two-site XXZ thermal state, ascending.
inline std::vector<double> xxz_two_site_spectrum(double beta, double eta) {
    const double e = std::exp(beta * eta / 4.0);
    std::vector<double> v{1.0 / e, 1.0 / e, e * std::exp(-beta / 2.0), e * std::exp(beta / 2.0)};
    double z = 0.0;
    for(double x : v) z += x;
    for(double &x : v) x /= z;
    return v;
}

inline double boson_n1_negativity(double beta) { return std::log(1.0 + std::tanh(beta)); }

inline double boson_n1_delta_sm(double beta) {
    const double th = std::tanh(beta);
    double       s  = std::log(2.0);
    for(double p : {(1.0 - th) / 2.0, (1.0 + th) / 2.0})
        if(p > 0.0) s += p * std::log(p);
    return s;
}

inline double entropy(const std::vector<double> &p) {
    double s = 0.0;
    for(double x : p)
        if(x > 1e-300) s -= x * std::log(x);
    return s;
}

/// Spinless fermions on L sites; state b has site s occupied iff bit s is set.
/// c_i^dag c_j with the Jordan-Wigner string counted over sites below.
inline RMatrix bit_hopping(int L, int i, int j) {
    const int dim = 1 << L;
    RMatrix   m   = RMatrix::Zero(dim, dim);
    for(int b = 0; b < dim; ++b) {
        if(!(b >> j & 1)) continue;
        int    c    = b & ~(1 << j);
        double sign = (__builtin_popcount(b & ((1 << j) - 1)) % 2) ? -1.0 : 1.0;
        if(c >> i & 1) continue;
        sign *= (__builtin_popcount(c & ((1 << i) - 1)) % 2) ? -1.0 : 1.0;
        c |= 1 << i;
        m(c, b) += sign;
    }
    return m;
}

/// -t sum (c^dag_{i+1} c_i + h.c.) + V sum n_i n_{i+1}, open chain.
inline RMatrix bit_chain(int L, double t, double V) {
    const int dim = 1 << L;
    RMatrix   h   = RMatrix::Zero(dim, dim);
    for(int i = 0; i + 1 < L; ++i) h -= t * (bit_hopping(L, i + 1, i) + bit_hopping(L, i, i + 1));
    for(int b = 0; b < dim; ++b)
        for(int i = 0; i + 1 < L; ++i)
            if((b >> i & 1) && (b >> (i + 1) & 1)) h(b, b) += V;
    return h;
}

inline int charge_in(int b, const std::vector<int> &sites) {
    int n = 0;
    for(int s : sites) n += b >> s & 1;
    return n;
}

inline RMatrix thermal(const RMatrix &h, double beta) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
    const RVector w   = (-beta * (es.eigenvalues().array() - es.eigenvalues().minCoeff())).exp();
    RMatrix       rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
    return rho / rho.trace();
}

inline RMatrix dephase(const RMatrix &rho, const std::vector<int> &a_sites) {
    RMatrix out = rho;
    for(int i = 0; i < rho.rows(); ++i)
        for(int j = 0; j < rho.cols(); ++j)
            if(charge_in(i, a_sites) != charge_in(j, a_sites)) out(i, j) = 0.0;
    return out;
}

/// S_2(rho_m) - S_2(rho) of the thermal chain by brute force.
inline double delta_s2_chain(int L, double t, double V, const std::vector<int> &a_sites, double beta) {
    const RMatrix rho = thermal(bit_chain(L, t, V), beta);
    return std::log(rho.squaredNorm()) - std::log(dephase(rho, a_sites).squaredNorm());
}

inline double von_neumann(const RMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(rho, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return entropy(v);
}

inline double delta_sm_chain(int L, double t, double V, const std::vector<int> &a_sites, double beta) {
    const RMatrix rho = thermal(bit_chain(L, t, V), beta);
    return von_neumann(dephase(rho, a_sites)) - von_neumann(rho);
}

/// P(N_A) of the N-particle ground state of the free chain.
inline std::vector<double> ground_state_distribution(int L, int N, const std::vector<int> &a_sites, double t = 1.0) {
    std::vector<int> states;
    for(int b = 0; b < (1 << L); ++b)
        if(__builtin_popcount(b) == N) states.push_back(b);
    const RMatrix h = bit_chain(L, t, 0.0);
    RMatrix       block(states.size(), states.size());
    for(std::size_t i = 0; i < states.size(); ++i)
        for(std::size_t j = 0; j < states.size(); ++j) block(i, j) = h(states[i], states[j]);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(block);
    const RVector psi = es.eigenvectors().col(0);
    std::vector<double> p(a_sites.size() + 1, 0.0);
    for(std::size_t i = 0; i < states.size(); ++i) p[static_cast<std::size_t>(charge_in(states[i], a_sites))] += psi(i) * psi(i);
    return p;
}

/// Distribution of a sum of independent Bernoulli(nu_k) variables.
inline std::vector<double> poisson_binomial(const std::vector<double> &nu) {
    std::vector<double> p{1.0};
    for(double q : nu) {
        std::vector<double> next(p.size() + 1, 0.0);
        for(std::size_t n = 0; n < p.size(); ++n) {
            next[n] += p[n] * (1.0 - q);
            next[n + 1] += p[n] * q;
        }
        p = std::move(next);
    }
    return p;
}

/// int_{-2pi}^{2pi} du (2pi - |u|)/(2pi)^2 base^{-u^2/pi^2} in closed form.
inline double cft_integral(double base) {
    const double g = std::log(base) / (pi * pi);
    if(g == 0.0) return 1.0;
    const double a = 2.0 * pi * std::sqrt(pi) / (2.0 * std::sqrt(g)) * std::erf(2.0 * pi * std::sqrt(g));
    const double b = (1.0 - std::exp(-4.0 * pi * pi * g)) / (2.0 * g);
    return (a - b) / (2.0 * pi * pi);
}

} // namespace oracle
