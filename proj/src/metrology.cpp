#include "ixy/metrology.hpp"

#include <cmath>
#include <string>

#include "ixy/dynamics.hpp"
#include "ixy/parallel.hpp"

namespace ixy {
namespace {

constexpr double kClipTolerance = 1e-10;
constexpr double kRatioFloor = 1e-30;

double ascending_sum(const std::vector<double>& values) {
  CompensatedSum<double> sum;
  for (double v : values) sum += v;
  return sum.value();
}

// Multiplies v by the phase that makes <ref|v> real and positive.
Vec2 align(const Vec2& ref, const Vec2& v) {
  const cdouble overlap = ref.dot(v);
  const double mag = std::abs(overlap);
  return mag > 0 ? Vec2(v * (std::conj(overlap) / mag)) : v;
}

}  // namespace

const char* to_string(Protocol protocol) {
  return protocol == Protocol::Dynamical ? "dynamical" : "stationary";
}

double clip_qfi(double value) {
  if (value >= 0) return value;
  if (value >= -kClipTolerance) return 0.0;
  throw NumericalError("negative QFI " + std::to_string(value));
}

double mode_qfi(const Vec2& phi, const Vec2& dphi) {
  const double n = phi.squaredNorm();
  if (!(n >= 1e-300)) throw DomainError("mode_qfi: state norm below 1e-300");
  const double wedge = std::abs(phi(0) * dphi(1) - phi(1) * dphi(0)) / n;
  return 4 * wedge * wedge;
}

double dynamical_qfi(std::span<const ModeBlock> blocks, double t, Parameter theta) {
  std::vector<double> per_mode(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto traj = evolve_mode_derivative(blocks[i], t, theta);
    per_mode[i] = mode_qfi(traj.state.amplitudes, traj.dstate);
  }
  return clip_qfi(ascending_sum(per_mode));
}

QfiSample dynamical_qfi(const ModelParams& params, double t, Parameter theta) {
  const auto blocks = build_blocks(params);
  return {t, dynamical_qfi(blocks, t, theta), Protocol::Dynamical, theta, params};
}

std::vector<QfiSample> dynamical_qfi_series(const ModelParams& params, std::span<const double> times,
                                            Parameter theta) {
  const auto blocks = build_blocks(params);
  std::vector<QfiSample> out(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    out[i] = {times[i], dynamical_qfi(blocks, times[i], theta), Protocol::Dynamical, theta, params};
  });
  return out;
}

double default_stationary_step(double theta_value) {
  return 1e-6 * std::max(1.0, std::abs(theta_value));
}

StationaryQfi stationary_qfi(const ModelParams& params, Parameter theta, double fd_step) {
  const auto couplings = mode_couplings(params);
  return stationary_qfi(params, couplings, theta, fd_step);
}

StationaryQfi stationary_qfi(const ModelParams& params, std::span<const cdouble> couplings,
                             Parameter theta, double fd_step) {
  if (!(fd_step > 0)) throw DomainError("stationary_qfi: fd_step must be > 0");
  const auto phi = mode_angles(params);
  if (couplings.size() != phi.size()) throw DomainError("stationary_qfi: coupling count mismatch");

  const double value = params.value_of(theta);
  auto block_at = [&](std::size_t i, double x) {
    const ModelParams q = params.with(theta, x);
    return make_block(static_cast<int>(i) + 1, phi[i], couplings[i], q.h, q.gamma, q.anisotropy);
  };
  auto broken = [](const ModeBlock& b) { return b.eps_sq < -kPhaseTolerance; };

  std::vector<double> per_mode(phi.size());
  std::vector<char> straddle(phi.size(), 0), coalesced(phi.size(), 0);
  parallel_for(phi.size(), [&](std::size_t i) {
    const auto center_block = block_at(i, value);
    const auto center = stationary_probe(center_block);
    const Vec2& v0 = center.state.amplitudes;
    auto probe = [&](double x) { return align(v0, stationary_probe(block_at(i, x)).state.amplitudes); };
    auto diff = [&](double d) { return Vec2((probe(value + d) - probe(value - d)) / (2 * d)); };
    const Vec2 dv = (4.0 * diff(fd_step / 2) - diff(fd_step)) / 3.0;
    per_mode[i] = mode_qfi(v0, dv);
    const bool lo = broken(block_at(i, value - fd_step)), hi = broken(block_at(i, value + fd_step));
    straddle[i] = lo != hi || lo != broken(center_block);
    coalesced[i] = center.kind == ProbeKind::Coalesced;
  });

  StationaryQfi out;
  out.fd_step = fd_step;
  out.sample = {0.0, clip_qfi(ascending_sum(per_mode)), Protocol::Stationary, theta, params};
  for (std::size_t i = 0; i < phi.size(); ++i) {
    out.straddling_modes += straddle[i];
    out.coalesced_modes += coalesced[i];
  }
  return out;
}

ModelParams hermitian_counterpart(const ModelParams& params) {
  ModelParams h = params;
  h.anisotropy = AnisotropyMode::Hermitian;
  return h;
}

RatioResult qfi_ratio_time_avg(const ModelParams& params, Parameter theta, double t0, double t1,
                               int n_grid) {
  if (!(t0 > 0 && t0 < t1)) throw DomainError("qfi_ratio_time_avg: need 0 < t0 < t1");
  if (n_grid < 2) throw DomainError("qfi_ratio_time_avg: n_grid must be >= 2");

  ModelParams nh = params;
  nh.anisotropy = AnisotropyMode::NonHermitian;
  const auto blocks_nh = build_blocks(nh);
  const auto blocks_h = build_blocks(hermitian_counterpart(params));

  RatioResult out;
  out.t0 = t0;
  out.t1 = t1;
  out.per_sample.resize(static_cast<std::size_t>(n_grid));
  parallel_for(out.per_sample.size(), [&](std::size_t i) {
    RatioSample& s = out.per_sample[i];
    s.t = i + 1 == out.per_sample.size() ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / (n_grid - 1);
    s.qfi_nh = dynamical_qfi(blocks_nh, s.t, theta);
    s.qfi_h = dynamical_qfi(blocks_h, s.t, theta);
    s.dropped = !(s.qfi_h >= kRatioFloor);
    s.ratio = s.dropped ? 0.0 : s.qfi_nh / s.qfi_h;
  });

  CompensatedSum<double> integral;
  const RatioSample* prev = nullptr;
  for (const auto& s : out.per_sample) {
    if (s.dropped) {
      ++out.n_dropped;
      continue;
    }
    ++out.n_samples;
    if (prev) integral += 0.5 * (s.t - prev->t) * (s.ratio + prev->ratio);
    prev = &s;
  }
  if (out.n_samples < 2) throw NumericalError("qfi_ratio_time_avg: fewer than 2 usable grid points");
  out.mean_ratio = integral.value() / (t1 - t0);
  return out;
}

}  // namespace ixy
