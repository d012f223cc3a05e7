#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fanopair {

using Complex = std::complex<double>;
using Vec2 = Eigen::Matrix<Complex, 2, 1>;
using Vec4 = Eigen::Matrix<Complex, 4, 1>;
using Mat2 = Eigen::Matrix<Complex, 2, 2>;
using Mat4 = Eigen::Matrix<Complex, 4, 4>;
using Mat42 = Eigen::Matrix<Complex, 4, 2>;
using RowVec2 = Eigen::Matrix<Complex, 1, 2>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

enum class Atom { A, B };

inline Atom partner(Atom atom) { return atom == Atom::A ? Atom::B : Atom::A; }
inline const char* atom_name(Atom atom) { return atom == Atom::A ? "a" : "b"; }

enum class ErrorCode {
    DivisionByZeroCoupling,
    InfeasibleParams,
    InvalidParams,
    DegenerateEigenvalues,
    NearDefectiveMatrix,
    GridTooNarrow,
    GridTooLarge,
    ZeroSecondMoment,
    NotNormalized,
    EmptyWindow,
    NonzeroCoupling,
    StepTooLarge,
    RecurrenceBound,
    ZeroDipole,
    ComplexCoupling,
    UnknownPreset,
    UnknownParameter,
    ToleranceFail,
    ConfigError,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying one of the library's error kinds.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fanopair
