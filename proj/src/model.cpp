#include "ixy/model.hpp"

#include <cmath>
#include <numbers>

#include "ixy/parallel.hpp"

namespace ixy {

void validate(const ModelParams& params) {
  if (params.N < 4 || params.N % 2 != 0)
    throw DomainError("N must be even and >= 4, got " + std::to_string(params.N));
  if (params.Z < 1 || params.Z > params.N / 2)
    throw DomainError("Z must satisfy 1 <= Z <= N/2, got Z=" + std::to_string(params.Z) +
                      " N=" + std::to_string(params.N));
  if (!std::isfinite(params.alpha) || params.alpha < 0)
    throw DomainError("alpha must be finite and >= 0");
  if (!std::isfinite(params.gamma)) throw DomainError("gamma must be finite");
  if (!std::isfinite(params.h)) throw DomainError("h must be finite");
}

std::string to_string(AnisotropyMode mode) {
  return mode == AnisotropyMode::NonHermitian ? "NonHermitian" : "Hermitian";
}

std::string to_string(ModeRange range) {
  return range == ModeRange::Full ? "Full" : "Reduced";
}

std::string to_string(Parameter theta) { return theta == Parameter::Field ? "h" : "gamma"; }

AnisotropyMode parse_anisotropy_mode(std::string_view text) {
  if (text == "NonHermitian" || text == "non-hermitian") return AnisotropyMode::NonHermitian;
  if (text == "Hermitian" || text == "hermitian") return AnisotropyMode::Hermitian;
  throw DomainError("unknown anisotropy mode '" + std::string(text) + "'");
}

ModeRange parse_mode_range(std::string_view text) {
  if (text == "Full" || text == "full") return ModeRange::Full;
  if (text == "Reduced" || text == "reduced") return ModeRange::Reduced;
  throw DomainError("unknown mode range '" + std::string(text) + "'");
}

Parameter parse_parameter(std::string_view text) {
  if (text == "h" || text == "field") return Parameter::Field;
  if (text == "gamma" || text == "anisotropy") return Parameter::Anisotropy;
  throw DomainError("unknown parameter '" + std::string(text) + "'");
}

int mode_count(const ModelParams& params) {
  return params.mode_range == ModeRange::Full ? params.N / 2 : params.N / 2 - 1;
}

std::vector<double> mode_angles(const ModelParams& params) {
  if (params.N < 2 || params.N % 2 != 0)
    throw DomainError("mode_angles: N must be even, got " + std::to_string(params.N));
  const int count = mode_count(params);
  std::vector<double> phi(static_cast<std::size_t>(count));
  for (int p = 1; p <= count; ++p)
    phi[static_cast<std::size_t>(p - 1)] = (2.0 * p - 1.0) * std::numbers::pi / params.N;
  return phi;
}

std::vector<cdouble> mode_couplings(const ModelParams& params) {
  validate(params);
  const auto profile = coupling_profile(params.alpha, params.Z);
  const long two_n = 2L * params.N;

  // cos/sin of m*pi/N for m in [0, 2N); r*(2p-1) mod 2N indexes the table.
  std::vector<double> cos_table(static_cast<std::size_t>(two_n));
  std::vector<double> sin_table(static_cast<std::size_t>(two_n));
  for (long m = 0; m < two_n; ++m) {
    const double x = std::numbers::pi * static_cast<double>(m) / params.N;
    cos_table[static_cast<std::size_t>(m)] = std::cos(x);
    sin_table[static_cast<std::size_t>(m)] = std::sin(x);
  }

  const int count = mode_count(params);
  std::vector<cdouble> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), [&](std::size_t i) {
    const long odd = 2L * static_cast<long>(i) + 1;
    CompensatedSum<double> re, im;
    for (int r = 1; r <= profile.range(); ++r) {
      const auto m = static_cast<std::size_t>((r * odd) % two_n);
      const double w = profile.weights[static_cast<std::size_t>(r - 1)];
      re += w * cos_table[m];
      im += w * sin_table[m];
    }
    out[i] = {re.value(), im.value()};
  });
  return out;
}

}  // namespace ixy
