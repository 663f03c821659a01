#ifndef IXY_DYNAMICS_HPP_
#define IXY_DYNAMICS_HPP_

#include "ixy/model.hpp"
#include "ixy/momentum.hpp"
#include "ixy/types.hpp"

namespace ixy {

/// C(x,t) = cos(sqrt(x) t), S(x,t) = sin(sqrt(x) t)/sqrt(x) and their
/// x-derivatives, all multiplied by exp(-log_scale). On the hyperbolic branch
/// (x < 0 outside the series region) log_scale = sqrt(-x) t, otherwise 0.
struct PropagatorKernel {
  double c = 1;
  double s = 0;
  double dc_dx = 0;
  double ds_dx = 0;
  double log_scale = 0;
};

PropagatorKernel propagator_kernel(double x, double t);

/// exp(-i M t) = C I - i S M. Throws DomainError for t < 0. The returned
/// matrix is unscaled, so it overflows for deep broken-phase blocks at long
/// times; use evolve_mode there.
Mat2 propagator(const ModeBlock& block, double t);

struct EvolvedMode {
  ModeState state;
  double log_norm = 0;  // log of the pre-normalization norm
};

/// Normalized U(t) (1, 0). Throws NumericalError if the norm underflows.
EvolvedMode evolve_mode(const ModeBlock& block, double t);

/// Unnormalized phi = U (1,0) and dphi = (d_theta U)(1,0), both multiplied by
/// exp(-log_scale).
struct ModeTrajectory {
  ModeState state{Vec2(1.0, 0.0), false};
  Vec2 dstate = Vec2::Zero();
  double log_scale = 0;
  Parameter theta = Parameter::Field;
};

double eps_sq_derivative(const ModeBlock& block, Parameter theta);
Eigen::Matrix2d generator_derivative(const ModeBlock& block, Parameter theta);

ModeTrajectory evolve_mode_derivative(const ModeBlock& block, double t, Parameter theta);
/// Mode p (1-based) of build_blocks(params).
ModeTrajectory evolve_mode_derivative(const ModelParams& params, int p, double t, Parameter theta);

}  // namespace ixy

#endif  // IXY_DYNAMICS_HPP_
