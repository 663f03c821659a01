#include "ixy/dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ixy {
namespace {

constexpr double kSeriesThreshold = 1e-2;
constexpr double kNormFloor = 1e-300;

// Taylor expansions in y = x t^2; |y| < kSeriesThreshold so a few terms suffice.
PropagatorKernel series_kernel(double x, double t) {
  const double y = x * t * t;
  double c = 0, s = 0, ds = 0;
  double term_c = 1;            // (-y)^k / (2k)!
  double term_s = 1;            // (-y)^k / (2k+1)!
  double term_ds = -1.0 / 6.0;  // (-1)^k k y^(k-1) / (2k+1)! at k = 1
  for (int k = 0; k < 40; ++k) {
    c += term_c;
    s += term_s;
    if (k >= 1) ds += term_ds;
    const double kk = k + 1;
    term_c *= -y / ((2 * kk - 1) * (2 * kk));
    term_s *= -y / ((2 * kk) * (2 * kk + 1));
    if (k >= 1) term_ds *= -y * kk / ((kk - 1) * (2 * kk) * (2 * kk + 1));
    const double eps = std::numeric_limits<double>::epsilon();
    if (std::abs(term_c) <= eps * std::abs(c) && std::abs(term_s) <= eps * std::abs(s) &&
        std::abs(term_ds) <= eps * std::abs(ds))
      break;
  }
  PropagatorKernel kernel;
  kernel.c = c;
  kernel.s = t * s;
  kernel.dc_dx = -t * kernel.s / 2;
  kernel.ds_dx = t * t * t * ds;
  return kernel;
}

}  // namespace

PropagatorKernel propagator_kernel(double x, double t) {
  if (t < 0) throw DomainError("propagator: t must be >= 0, got " + std::to_string(t));
  if (std::abs(x) * t * t < kSeriesThreshold) return series_kernel(x, t);

  PropagatorKernel kernel;
  if (x > 0) {
    const double w = std::sqrt(x);
    kernel.c = std::cos(w * t);
    kernel.s = std::sin(w * t) / w;
  } else {
    // Factor out e^{kappa t}; squared norms of the raw amplitudes overflow long
    // before cosh does.
    const double kappa = std::sqrt(-x);
    const double kt = kappa * t;
    kernel.c = (1 + std::exp(-2 * kt)) / 2;
    kernel.s = -std::expm1(-2 * kt) / (2 * kappa);
    kernel.log_scale = kt;
  }
  kernel.dc_dx = -t * kernel.s / 2;
  kernel.ds_dx = (t * kernel.c - kernel.s) / (2 * x);
  return kernel;
}

Mat2 propagator(const ModeBlock& block, double t) {
  const auto k = propagator_kernel(block.eps_sq, t);
  const double scale = std::exp(k.log_scale);
  const cdouble i(0, 1);
  return (k.c * scale) * Mat2::Identity() - i * (k.s * scale) * block_matrix(block).cast<cdouble>();
}

namespace {

// First column of the (scaled) propagator.
Vec2 evolved_column(const ModeBlock& block, const PropagatorKernel& k) {
  const cdouble i(0, 1);
  const auto m = block_matrix(block);
  return Vec2(k.c - i * k.s * m(0, 0), -i * k.s * m(1, 0));
}

}  // namespace

EvolvedMode evolve_mode(const ModeBlock& block, double t) {
  const auto k = propagator_kernel(block.eps_sq, t);
  const Vec2 phi = evolved_column(block, k);
  const double norm = phi.norm();
  if (!(norm >= kNormFloor))
    throw NumericalError("evolve_mode: state norm underflow at mode " + std::to_string(block.p));
  EvolvedMode out;
  out.state.amplitudes = phi / norm;
  out.state.normalized = true;
  out.log_norm = std::log(norm) + k.log_scale;
  return out;
}

double eps_sq_derivative(const ModeBlock& block, Parameter theta) {
  if (theta == Parameter::Field) return 2 * block.a;
  const double d = 2 * block.b * block.j_imag;
  return block.mode == AnisotropyMode::NonHermitian ? -d : d;
}

Eigen::Matrix2d generator_derivative(const ModeBlock& block, Parameter theta) {
  Eigen::Matrix2d dm;
  if (theta == Parameter::Field) {
    dm << -1, 0, 0, 1;
  } else {
    const double j = block.j_imag;
    dm << 0, -j, (block.mode == AnisotropyMode::NonHermitian ? j : -j), 0;
  }
  return dm;
}

ModeTrajectory evolve_mode_derivative(const ModeBlock& block, double t, Parameter theta) {
  const auto k = propagator_kernel(block.eps_sq, t);
  const cdouble i(0, 1);
  const auto m = block_matrix(block);
  const auto dm = generator_derivative(block, theta);
  const double dx = eps_sq_derivative(block, theta);

  ModeTrajectory out;
  out.theta = theta;
  out.log_scale = k.log_scale;
  out.state.amplitudes = evolved_column(block, k);
  out.state.normalized = false;
  out.dstate = Vec2(dx * (k.dc_dx - i * k.ds_dx * m(0, 0)) - i * k.s * dm(0, 0),
                    dx * (-i * k.ds_dx * m(1, 0)) - i * k.s * dm(1, 0));
  return out;
}

ModeTrajectory evolve_mode_derivative(const ModelParams& params, int p, double t,
                                      Parameter theta) {
  const auto blocks = build_blocks(params);
  if (p < 1 || p > static_cast<int>(blocks.size()))
    throw DomainError("evolve_mode_derivative: mode index " + std::to_string(p) + " out of range");
  return evolve_mode_derivative(blocks[static_cast<std::size_t>(p - 1)], t, theta);
}

}  // namespace ixy
