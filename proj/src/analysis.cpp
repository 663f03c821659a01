#include "ixy/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ixy/parallel.hpp"

namespace ixy {

PowerFit fit_power_law(std::span<const double> x, std::span<const double> y, double window_min,
                       double window_max) {
  if (x.size() != y.size()) throw FitError("fit_power_law: x and y differ in length");
  std::vector<double> lx, ly;
  PowerFit fit;
  fit.x_min = window_min;
  fit.x_max = window_max;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= window_min && x[i] <= window_max)) continue;
    if (!(y[i] > 0) || !(x[i] > 0)) {
      ++fit.n_excluded;
      continue;
    }
    lx.push_back(std::log10(x[i]));
    ly.push_back(std::log10(y[i]));
  }
  const std::size_t n = lx.size();
  if (n < 3)
    throw FitError("fit_power_law: " + std::to_string(n) + " usable points in window, need 3");

  CompensatedSum<double> sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx.value() / n, my = sy.value() / n;
  CompensatedSum<double> sxx, sxy, syy;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = lx[i] - mx, dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx.value() > 0)) throw FitError("fit_power_law: all x values coincide");

  fit.n_points = static_cast<int>(n);
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  CompensatedSum<double> ss_res;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
  }
  const double res = ss_res.value();
  fit.r_squared = syy.value() > 0 ? std::clamp(1.0 - res / syy.value(), 0.0, 1.0) : 1.0;
  fit.slope_stderr = n > 2 ? std::sqrt(res / static_cast<double>(n - 2) / sxx.value()) : 0.0;
  return fit;
}

PowerFit fit_power_law(std::span<const QfiSample> samples, double window_min, double window_max) {
  std::vector<double> x, y;
  for (const auto& s : samples) {
    x.push_back(s.x);
    y.push_back(s.value);
  }
  return fit_power_law(x, y, window_min, window_max);
}

EPResult find_exceptional_point(const ModelParams& params, double lo, double hi, double tol) {
  if (!(tol > 0)) throw DomainError("find_exceptional_point: tol must be > 0");
  if (!(lo < hi)) throw DomainError("find_exceptional_point: need lo < hi");
  validate(params);
  const auto couplings = mode_couplings(params);
  auto phase = [&](double h) {
    ModelParams q = params;
    q.h = h;
    const auto blocks = build_blocks(q, couplings);
    return classify_phase(blocks).label;
  };

  const Phase phase_lo = phase(lo), phase_hi = phase(hi);
  if (phase_lo == phase_hi)
    throw DomainError(std::string("find_exceptional_point: bracket [") + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] does not straddle a transition (both " +
                      to_string(phase_lo) + ")");

  // Coarse scan so that bisection targets the first transition above lo.
  constexpr int kScan = 256;
  double a = lo, b = hi;
  for (int k = 1; k <= kScan; ++k) {
    const double x = k == kScan ? hi : lo + (hi - lo) * k / kScan;
    if (phase(x) != phase_lo) {
      b = x;
      break;
    }
    a = x;
  }

  EPResult out;
  out.gamma = params.gamma;
  out.alpha = params.alpha;
  out.Z = params.Z;
  out.N = params.N;
  out.tol = tol;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    (phase(mid) == phase_lo ? a : b) = mid;
    ++out.iterations;
  }
  out.h_lo = a;
  out.h_hi = b;
  out.h_e = 0.5 * (a + b);
  return out;
}

std::vector<double> QfiSeries::xs() const {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(s.x);
  return out;
}

std::vector<double> QfiSeries::values() const {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(s.value);
  return out;
}

std::vector<double> TimeGrid::points() const {
  if (!(t_min > 0 && t_max > t_min) || n < 2)
    throw DomainError("TimeGrid: need 0 < t_min < t_max and n >= 2");
  std::vector<double> t(static_cast<std::size_t>(n));
  const double l0 = std::log10(t_min), l1 = std::log10(t_max);
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = std::pow(10.0, l0 + (l1 - l0) * i / (n - 1));
  t.front() = t_min;
  t.back() = t_max;
  return t;
}

TimeScalingResult sweep_time_scaling(const ModelParams& params, Parameter theta,
                                     const TimeScalingGrids& grids) {
  auto times = grids.transient.points();
  const auto late = grids.long_time.points();
  times.insert(times.end(), late.begin(), late.end());

  TimeScalingResult out;
  out.series.theta = theta;
  out.series.samples = dynamical_qfi_series(params, times, theta);
  out.transient = fit_power_law(out.series.samples, grids.transient.t_min, grids.transient.t_max);
  out.long_time = fit_power_law(out.series.samples, grids.long_time.t_min, grids.long_time.t_max);
  return out;
}

ModelParams resized(const ModelParams& params, int N, bool z_half_n) {
  ModelParams q = params;
  q.N = N;
  if (z_half_n) q.Z = N / 2;
  validate(q);
  return q;
}

SizeScalingResult sweep_size_scaling(const ModelParams& params, Parameter theta, double t_eval,
                                     std::span<const int> sizes, bool z_half_n) {
  if (!(t_eval > 0)) throw DomainError("sweep_size_scaling: t_eval must be > 0");
  SizeScalingResult out;
  out.series.theta = theta;
  out.series.x_name = "N";
  out.series.samples.resize(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    const ModelParams q = resized(params, sizes[i], z_half_n);
    QfiSample s = dynamical_qfi(q, t_eval, theta);
    s.x = sizes[i];
    out.series.samples[i] = s;
  });
  const auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
  out.fit = fit_power_law(out.series.samples, *mn, *mx);
  return out;
}

const char* to_string(Anchor anchor) {
  return anchor == Anchor::ExceptionalPoint ? "exceptional-point" : "critical-point";
}

Anchor parse_anchor(const std::string& text) {
  if (text == "exceptional-point" || text == "ep" || text == "ExceptionalPoint")
    return Anchor::ExceptionalPoint;
  if (text == "critical-point" || text == "cp" || text == "CriticalPoint")
    return Anchor::CriticalPoint;
  throw DomainError("unknown anchor '" + text + "'");
}

std::vector<StationaryCell> sweep_stationary_scaling(const ModelParams& params, Parameter theta,
                                                     std::span<const double> dh_list,
                                                     std::span<const int> sizes, Anchor anchor,
                                                     const StationarySweepOptions& options) {
  if (dh_list.empty() || sizes.empty()) throw DomainError("sweep_stationary_scaling: empty grid");

  std::vector<double> anchors(sizes.size(), critical_field_zero());
  std::vector<std::vector<cdouble>> couplings(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    const ModelParams q = resized(params, sizes[i], options.z_half_n);
    couplings[i] = mode_couplings(q);
    if (anchor == Anchor::ExceptionalPoint)
      anchors[i] = find_exceptional_point(q, options.ep_lo, options.ep_hi, options.ep_tol).h_e;
  });

  std::vector<StationaryCell> cells(dh_list.size());
  for (std::size_t d = 0; d < dh_list.size(); ++d) {
    cells[d].dh = dh_list[d];
    cells[d].points.resize(sizes.size());
  }
  parallel_for(dh_list.size() * sizes.size(), [&](std::size_t k) {
    const std::size_t d = k / sizes.size(), i = k % sizes.size();
    const double dh = dh_list[d];
    ModelParams q = resized(params, sizes[i], options.z_half_n);
    q.h = anchors[i] + dh;
    const double base =
        options.base_step > 0 ? options.base_step : default_stationary_step(q.value_of(theta));
    const double step = dh != 0 ? std::min(base, std::abs(dh) / 10) : base;
    const auto result = stationary_qfi(q, couplings[i], theta, step);
    cells[d].points[i] = {sizes[i], anchors[i], q.h, step, result.sample.value,
                          result.straddling_modes, result.coalesced_modes};
  });

  for (auto& cell : cells) {
    std::vector<double> x, y;
    for (const auto& p : cell.points) {
      x.push_back(p.N);
      y.push_back(p.qfi);
    }
    cell.fit = fit_power_law(x, y, *std::min_element(x.begin(), x.end()),
                             *std::max_element(x.begin(), x.end()));
  }
  return cells;
}

}  // namespace ixy
