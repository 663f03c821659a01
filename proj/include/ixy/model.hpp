#ifndef IXY_MODEL_HPP_
#define IXY_MODEL_HPP_

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "ixy/types.hpp"

namespace ixy {

/// How the anisotropy enters the pairing term: i*gamma (the iXY chain) or
/// real gamma (the Hermitian XY benchmark).
enum class AnisotropyMode { NonHermitian, Hermitian };

/// Which quasi-momenta phi_p = (2p-1) pi / N are kept: p = 1..N/2 (Full) or
/// p = 1..N/2-1 (Reduced, drops the mode next to phi = pi).
enum class ModeRange { Full, Reduced };

/// The parameter being estimated.
enum class Parameter { Field, Anisotropy };

struct ModelParams {
  int N = 1024;
  int Z = 1;
  double alpha = 1.5;
  double gamma = 0.3;
  double h = -0.7;
  AnisotropyMode anisotropy = AnisotropyMode::NonHermitian;
  ModeRange mode_range = ModeRange::Full;

  /// Value of the estimated parameter.
  double value_of(Parameter theta) const { return theta == Parameter::Field ? h : gamma; }
  ModelParams with(Parameter theta, double value) const {
    ModelParams p = *this;
    (theta == Parameter::Field ? p.h : p.gamma) = value;
    return p;
  }
};

/// Throws DomainError unless N is even and >= 4, 1 <= Z <= N/2, alpha >= 0 and
/// all reals are finite.
void validate(const ModelParams& params);

std::string to_string(AnisotropyMode mode);
std::string to_string(ModeRange range);
std::string to_string(Parameter theta);
AnisotropyMode parse_anisotropy_mode(std::string_view text);
ModeRange parse_mode_range(std::string_view text);
Parameter parse_parameter(std::string_view text);

/// Kac normalizer sum_{r=1}^{Z} r^{-alpha}, accumulated in ascending r.
template <typename Real>
Real kac_factor(Real alpha, int Z) {
  if (Z < 1) throw DomainError("kac_factor: Z must be >= 1, got " + std::to_string(Z));
  CompensatedSum<Real> sum;
  for (int r = 1; r <= Z; ++r) sum += std::pow(static_cast<Real>(r), -alpha);
  return sum.value();
}

/// Generalized harmonic number H_n^(alpha); H_0 = 0.
template <typename Real>
Real generalized_harmonic(Real alpha, int n) {
  return n < 1 ? Real(0) : kac_factor(alpha, n);
}

template <typename Real>
struct CouplingProfile {
  Real kac;
  std::vector<Real> weights;  // weights[r-1] = J_r(alpha)

  int range() const { return static_cast<int>(weights.size()); }
};

template <typename Real>
CouplingProfile<Real> coupling_profile(Real alpha, int Z) {
  CouplingProfile<Real> profile{kac_factor(alpha, Z), {}};
  profile.weights.reserve(static_cast<std::size_t>(Z));
  for (int r = 1; r <= Z; ++r)
    profile.weights.push_back(std::pow(static_cast<Real>(r), -alpha) / profile.kac);
  return profile;
}

/// J(phi) = sum_r J_r e^{i r phi}.
template <typename Real>
std::complex<Real> momentum_coupling(const CouplingProfile<Real>& profile, Real phi) {
  CompensatedSum<Real> re, im;
  for (int r = 1; r <= profile.range(); ++r) {
    const Real w = profile.weights[static_cast<std::size_t>(r - 1)];
    re += w * std::cos(r * phi);
    im += w * std::sin(r * phi);
  }
  return {re.value(), im.value()};
}

int mode_count(const ModelParams& params);

/// phi_p = (2p-1) pi / N for the configured mode range, ascending.
std::vector<double> mode_angles(const ModelParams& params);

/// J(phi_p) for every mode of mode_angles(params). The phases r*phi_p are
/// reduced exactly modulo 2*pi on the integer lattice m*pi/N, so large Z costs
/// no accuracy.
std::vector<cdouble> mode_couplings(const ModelParams& params);

/// Gap-closing field at phi -> 0; -1 for every (alpha, Z) by Kac normalization.
constexpr double critical_field_zero() { return -1.0; }

/// Gap-closing field at phi -> pi:
/// 1 - 2^{1-alpha} H_{floor(Z/2)} / H_Z.
template <typename Real>
Real critical_field_pi(Real alpha, int Z) {
  if (Z < 1) throw DomainError("critical_field_pi: Z must be >= 1, got " + std::to_string(Z));
  return Real(1) - std::pow(Real(2), Real(1) - alpha) * generalized_harmonic(alpha, Z / 2) /
                       generalized_harmonic(alpha, Z);
}

}  // namespace ixy

#endif  // IXY_MODEL_HPP_
