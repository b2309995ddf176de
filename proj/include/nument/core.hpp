#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace nument {

using cplx    = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

enum class ErrorCode {
    invalid_argument,
    basis_too_large,
    aliasing,
    empty_sector,
    psd_violation,
    unsupported_layout,
    unknown_tag,
    incomplete_channel,
    partition_function,
    quadrature,
    domain,
    numerical_failure,
};

/// Every failure raised by the library carries a code so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

    /// Input/configuration problems, as opposed to numerical breakdown.
    [[nodiscard]] bool is_validation() const noexcept {
        switch(code_) {
            case ErrorCode::invalid_argument:
            case ErrorCode::basis_too_large:
            case ErrorCode::aliasing:
            case ErrorCode::unsupported_layout:
            case ErrorCode::unknown_tag:
            case ErrorCode::incomplete_channel:
            case ErrorCode::domain: return true;
            default: return false;
        }
    }

  private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string &what) {
    if(!condition) throw Error(code, what);
}

} // namespace nument
