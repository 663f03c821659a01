#ifndef IXY_TYPES_HPP_
#define IXY_TYPES_HPP_

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Core>

namespace ixy {

template <typename Scalar>
using Vector2c = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
using Matrix2r = Eigen::Matrix<Scalar, 2, 2>;

using cdouble = std::complex<double>;
using Vec2 = Vector2c<double>;
using Mat2 = Matrix2c<double>;

/// Violated precondition on an operation's arguments.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation that cannot produce a finite, meaningful result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration; carries the 1-based line of the
/// offending entry when it is known (0 otherwise).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Neumaier-compensated running sum. Works for real and std::complex scalars
/// (the correction is tracked per component).
template <typename T>
class CompensatedSum {
 public:
  void add(const T& x) {
    if constexpr (std::is_floating_point_v<T>) {
      step(sum_, comp_, x);
    } else {
      auto re = sum_.real(), im = sum_.imag();
      auto cre = comp_.real(), cim = comp_.imag();
      step(re, cre, x.real());
      step(im, cim, x.imag());
      sum_ = T(re, im);
      comp_ = T(cre, cim);
    }
  }
  CompensatedSum& operator+=(const T& x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  template <typename R>
  static void step(R& sum, R& comp, R x) {
    const R t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  T sum_{};
  T comp_{};
};

}  // namespace ixy

#endif  // IXY_TYPES_HPP_
