#pragma once

// Closed-form reference curves: the leading high-temperature results, the
// cylinder four-point function of vertex operators and its Delta S_2
// integral, and the fitted zero-temperature scaling forms. Plus the small
// least-squares helpers the sweeps use to extract coefficients.

#include "nument/core.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <span>
#include <vector>

namespace nument {

/// Delta S_2 = area t^2 beta^2 / 2 (area = 2 for an interior 1D interval).
inline double high_t_delta_s2(double t, double beta, double area = 2.0) { return area * t * t * beta * beta / 2.0; }

/// Delta S_m = area t^2 beta^2 / 4, half the Renyi-2 value.
inline double high_t_delta_sm(double t, double beta, double area = 2.0) { return area * t * t * beta * beta / 4.0; }

/// The leading expansion needs beta t << 1.
inline bool high_t_valid(double t, double beta) { return std::abs(beta * t) < 1.0; }

inline constexpr double cft_base_floor = 1e-300;

/// (2 beta/pi) tanh(pi L_A / (2 beta)); tends to L_A as beta -> infinity.
inline double cft_base(double beta, double L_A) {
    require(beta > 0.0 && L_A > 0.0, ErrorCode::domain, "CFT needs beta > 0 and L_A > 0");
    if(std::isinf(beta)) return L_A;
    const double x = pi * L_A / (2.0 * beta);
    // tanh(x)/x -> 1 for small x; keep full precision there.
    const double ratio = x < 1e-8 ? 1.0 - x * x / 3.0 : std::tanh(x) / x;
    return L_A * ratio;
}

/// <V V V V> on the cylinder of circumference 2 beta: base^{-alpha12^2/pi^2}.
inline double cft_four_point(double alpha12, double beta, double L_A) {
    const double base = cft_base(beta, L_A);
    require(base > cft_base_floor, ErrorCode::domain, "CFT base below numerical floor");
    return std::exp(-alpha12 * alpha12 / (pi * pi) * std::log(base));
}

inline constexpr double cft_relative_tolerance = 1e-8;

/// -log int_{-2pi}^{2pi} du (2pi - |u|)/(2pi)^2 <VVVV>(u), adaptive
/// Gauss-Kronrod on the folded interval [0, 2pi].
inline double cft_delta_s2(double beta, double L_A) {
    const double base = cft_base(beta, L_A);
    require(base >= 1.0, ErrorCode::domain, "outside CFT validity: (2 beta/pi) tanh(pi L_A/2beta) < 1");
    const double g = std::log(base) / (pi * pi);
    auto f = [g](double u) { return std::exp(-g * u * u) * 2.0 * (2.0 * pi - u) / (4.0 * pi * pi); };
    double error = 0.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 2.0 * pi, 15, cft_relative_tolerance, &error);
    require(std::isfinite(integral) && integral > 0.0 && error <= cft_relative_tolerance * integral * 10.0,
            ErrorCode::quadrature, "CFT quadrature did not converge");
    return -std::log(integral);
}

/// 1/2 log((2K/pi) log L_A).
inline double cft_t0_asymptote(double L_A, double K = 1.0) {
    require(K > 0.0, ErrorCode::domain, "Luttinger parameter must be positive");
    require(L_A > 1.0, ErrorCode::domain, "asymptote needs log L_A > 0");
    return 0.5 * std::log(2.0 * K / pi * std::log(L_A));
}

/// Fitted zero-temperature number entropy, 1/2 log(1.731 (log L_A + 2.269)).
inline double number_entropy_fit(double L_A) { return 0.5 * std::log(1.731 * (std::log(L_A) + 2.269)); }

/// Fitted zero-temperature entanglement entropy, (1/3) log L_A + 0.726.
inline double entanglement_entropy_fit(double L_A) { return std::log(L_A) / 3.0 + 0.726; }

struct LinearFit {
    double slope;
    double intercept;
};

/// Ordinary least squares y = slope x + intercept.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorCode::invalid_argument, "line fit needs >= 2 matching points");
    const double n = static_cast<double>(x.size());
    double       sx = 0, sy = 0, sxx = 0, sxy = 0;
    for(std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    require(den != 0.0, ErrorCode::invalid_argument, "degenerate abscissae in line fit");
    const double slope = (n * sxy - sx * sy) / den;
    return {slope, (sy - slope * sx) / n};
}

/// Least squares c in y = c x^p for a fixed exponent p.
inline double fit_power_coefficient(std::span<const double> x, std::span<const double> y, double p) {
    require(x.size() == y.size() && !x.empty(), ErrorCode::invalid_argument, "power fit needs matching points");
    double num = 0.0, den = 0.0;
    for(std::size_t i = 0; i < x.size(); ++i) {
        const double xp = std::pow(x[i], p);
        num += xp * y[i];
        den += xp * xp;
    }
    return num / den;
}

struct PowerLawFit {
    double exponent;
    double coefficient;
};

/// log y = exponent log x + log coefficient.
inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx, ly;
    for(std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::domain, "power-law fit needs positive data");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const auto line = fit_line(lx, ly);
    return {line.slope, std::exp(line.intercept)};
}

} // namespace nument
