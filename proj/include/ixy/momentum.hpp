#ifndef IXY_MOMENTUM_HPP_
#define IXY_MOMENTUM_HPP_

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ixy/model.hpp"
#include "ixy/types.hpp"

namespace ixy {

/// One momentum sector. a = h + Re J(phi), b = gamma Im J(phi).
struct ModeBlock {
  int p = 1;
  double phi = 0;
  double j_real = 0;
  double j_imag = 0;
  double a = 0;
  double b = 0;
  double eps_sq = 0;
  AnisotropyMode mode = AnisotropyMode::NonHermitian;
};

ModeBlock make_block(int p, double phi, cdouble coupling, double h, double gamma,
                     AnisotropyMode mode);

std::vector<ModeBlock> build_blocks(const ModelParams& params);
/// Same as build_blocks(params) but reuses couplings from mode_couplings(params);
/// handy when only h or gamma change between calls.
std::vector<ModeBlock> build_blocks(const ModelParams& params, std::span<const cdouble> couplings);

/// [[-a, -b], [b, a]] (NonHermitian) or [[-a, -b], [-b, a]] (Hermitian).
template <typename Real = double>
Matrix2r<Real> block_matrix(const ModeBlock& block) {
  Matrix2r<Real> m;
  const Real a = static_cast<Real>(block.a), b = static_cast<Real>(block.b);
  m << -a, -b, (block.mode == AnisotropyMode::NonHermitian ? b : -b), a;
  return m;
}

/// Principal square root of eps_sq; +i sqrt(-eps_sq) in the broken regime.
cdouble dispersion(const ModeBlock& block);

inline constexpr double kPhaseTolerance = 1e-12;

enum class Phase { Unbroken, Broken };

struct SpectrumClassification {
  Phase label = Phase::Unbroken;
  double min_eps_sq = 0;
  int argmin_mode = 0;
};

/// Broken iff some eps_sq < -kPhaseTolerance. Throws DomainError when empty.
SpectrumClassification classify_phase(std::span<const ModeBlock> blocks);

const char* to_string(Phase phase);

/// Two amplitudes in the {vacuum, paired} basis of a mode.
struct ModeState {
  Vec2 amplitudes = Vec2(1.0, 0.0);
  bool normalized = true;

  cdouble amp0() const { return amplitudes(0); }
  cdouble amp2() const { return amplitudes(1); }
};

enum class ProbeKind { Regular, Coalesced, Degenerate };

struct StationaryProbe {
  ModeState state;
  cdouble eigenvalue;
  ProbeKind kind = ProbeKind::Regular;
};

/// Dominant eigenvector of the block: eigenvalue -eps when eps_sq > 0, +i|eps|
/// when eps_sq < 0, the single coalesced direction when |eps_sq| is within
/// kPhaseTolerance. Unit norm; the largest component (the first on a tie) is
/// real and positive.
StationaryProbe stationary_probe(const ModeBlock& block);

}  // namespace ixy

#endif  // IXY_MOMENTUM_HPP_
