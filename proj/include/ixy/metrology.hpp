#ifndef IXY_METROLOGY_HPP_
#define IXY_METROLOGY_HPP_

#include <span>
#include <vector>

#include "ixy/model.hpp"
#include "ixy/momentum.hpp"
#include "ixy/types.hpp"

namespace ixy {

enum class Protocol { Dynamical, Stationary };

const char* to_string(Protocol protocol);

/// One QFI value; x is t, N or dh depending on the sweep.
struct QfiSample {
  double x = 0;
  double value = 0;
  Protocol protocol = Protocol::Dynamical;
  Parameter theta = Parameter::Field;
  ModelParams params;
};

/// Maps values in [-1e-10, 0) to 0; anything lower is a NumericalError.
double clip_qfi(double value);

/// 4 [<dphi|dphi>/n - |<phi|dphi>|^2/n^2], n = <phi|phi>, for an unnormalized
/// two-component state. Evaluated through the equivalent
/// 4 |phi0 dphi1 - phi1 dphi0|^2 / n^2, which has no cancellation.
/// Throws DomainError when n < 1e-300.
double mode_qfi(const Vec2& phi, const Vec2& dphi);

/// Sum of mode_qfi over blocks in ascending order.
double dynamical_qfi(std::span<const ModeBlock> blocks, double t, Parameter theta);
QfiSample dynamical_qfi(const ModelParams& params, double t, Parameter theta);
/// One sample per time; blocks are built once.
std::vector<QfiSample> dynamical_qfi_series(const ModelParams& params, std::span<const double> times,
                                            Parameter theta);

struct StationaryQfi {
  QfiSample sample;
  double fd_step = 0;
  int straddling_modes = 0;  // modes whose phase differs across the FD stencil
  int coalesced_modes = 0;   // modes evaluated at the defective point
};

/// Default stationary FD step, 1e-6 max(1, |theta|).
double default_stationary_step(double theta_value);

/// QFI of the product of per-mode dominant eigenvectors. Derivatives are
/// central differences of phase-aligned probes with one Richardson step.
StationaryQfi stationary_qfi(const ModelParams& params, Parameter theta, double fd_step);
StationaryQfi stationary_qfi(const ModelParams& params, std::span<const cdouble> couplings,
                             Parameter theta, double fd_step);

/// Same parameters with real anisotropy.
ModelParams hermitian_counterpart(const ModelParams& params);

struct RatioSample {
  double t = 0;
  double qfi_nh = 0;
  double qfi_h = 0;
  double ratio = 0;
  bool dropped = false;
};

struct RatioResult {
  double mean_ratio = 0;
  double t0 = 0;
  double t1 = 0;
  int n_samples = 0;
  int n_dropped = 0;
  std::vector<RatioSample> per_sample;
};

/// Trapezoid average of F_nonhermitian / F_hermitian over n_grid uniform
/// points in [t0, t1], divided by t1 - t0. Points with F_hermitian < 1e-30 are
/// dropped and the rule is applied to the rest.
RatioResult qfi_ratio_time_avg(const ModelParams& params, Parameter theta, double t0, double t1,
                               int n_grid = 801);

}  // namespace ixy

#endif  // IXY_METROLOGY_HPP_
