#ifndef IXY_ANALYSIS_HPP_
#define IXY_ANALYSIS_HPP_

#include <span>
#include <string>
#include <vector>

#include "ixy/metrology.hpp"
#include "ixy/model.hpp"
#include "ixy/momentum.hpp"

namespace ixy {

/// OLS fit of log10 y = slope log10 x + intercept.
struct PowerFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double slope_stderr = 0;
  double x_min = 0;
  double x_max = 0;
  int n_points = 0;
  int n_excluded = 0;  // in-window points dropped because y <= 0
};

/// Uses the points with x in [window_min, window_max]. Throws FitError with
/// fewer than 3 usable points.
PowerFit fit_power_law(std::span<const double> x, std::span<const double> y, double window_min,
                       double window_max);
PowerFit fit_power_law(std::span<const QfiSample> samples, double window_min, double window_max);

struct EPResult {
  double h_e = 0;
  double h_lo = 0;
  double h_hi = 0;
  double tol = 0;
  int iterations = 0;
  double gamma = 0;
  double alpha = 0;
  int Z = 0;
  int N = 0;
};

/// Bisection on the phase predicate for h in [lo, hi]; params.h is ignored.
/// When several transitions lie in the bracket the one closest to lo is
/// returned. Throws DomainError when both ends are in the same phase.
EPResult find_exceptional_point(const ModelParams& params, double lo = -1.2, double hi = -0.7,
                                double tol = 1e-9);

struct QfiSeries {
  Parameter theta = Parameter::Field;
  Protocol protocol = Protocol::Dynamical;
  std::string x_name = "t";
  std::vector<QfiSample> samples;

  std::vector<double> xs() const;
  std::vector<double> values() const;
};

/// n log-spaced points in [t_min, t_max].
struct TimeGrid {
  double t_min = 0;
  double t_max = 0;
  int n = 0;

  std::vector<double> points() const;
};

struct TimeScalingGrids {
  TimeGrid transient{1e-3, 2.0, 60};
  TimeGrid long_time{200.0, 1000.0, 60};
};

struct TimeScalingResult {
  QfiSeries series;
  PowerFit transient;
  PowerFit long_time;
};

/// Fit windows equal the grid bounds.
TimeScalingResult sweep_time_scaling(const ModelParams& params, Parameter theta,
                                     const TimeScalingGrids& grids = {});

struct SizeScalingResult {
  QfiSeries series;
  PowerFit fit;
};

/// params with N replaced; Z becomes N/2 when z_half_n is set.
ModelParams resized(const ModelParams& params, int N, bool z_half_n);

SizeScalingResult sweep_size_scaling(const ModelParams& params, Parameter theta, double t_eval,
                                     std::span<const int> sizes, bool z_half_n = false);

enum class Anchor { ExceptionalPoint, CriticalPoint };

const char* to_string(Anchor anchor);
Anchor parse_anchor(const std::string& text);

struct StationarySweepOptions {
  double ep_lo = -1.2;
  double ep_hi = -0.7;
  double ep_tol = 1e-9;
  double base_step = 0;  // 0 selects 1e-6 max(1, |theta|)
  bool z_half_n = false;
};

struct StationaryPoint {
  int N = 0;
  double anchor_h = 0;
  double h = 0;
  double fd_step = 0;
  double qfi = 0;
  int straddling_modes = 0;
  int coalesced_modes = 0;
};

struct StationaryCell {
  double dh = 0;
  std::vector<StationaryPoint> points;  // one per size, in input order
  PowerFit fit;
};

/// For each dh, F(N) at h = anchor(N) + dh with FD step
/// min(base_step, |dh|/10), then mu from a power fit over all sizes.
/// The exceptional-point anchor is located separately for every N.
std::vector<StationaryCell> sweep_stationary_scaling(const ModelParams& params, Parameter theta,
                                                     std::span<const double> dh_list,
                                                     std::span<const int> sizes, Anchor anchor,
                                                     const StationarySweepOptions& options = {});

}  // namespace ixy

#endif  // IXY_ANALYSIS_HPP_
