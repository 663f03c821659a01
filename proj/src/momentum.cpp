#include "ixy/momentum.hpp"

#include <cmath>
#include <string>

namespace ixy {
namespace {

// Broken-phase eigenvectors have components of equal modulus; ties go to the first.
Vec2 fix_gauge(Vec2 v) {
  v /= v.norm();
  const int k = std::abs(v(1)) > std::abs(v(0)) * (1 + 1e-12) ? 1 : 0;
  const cdouble pivot = v(k);
  v *= std::conj(pivot) / std::abs(pivot);
  v(k) = std::abs(v(k));
  return v;
}

// Of the two row-derived eigenvector candidates, keep the better conditioned one.
Vec2 pick(const Vec2& first, const Vec2& second) {
  return first.squaredNorm() >= second.squaredNorm() ? first : second;
}

}  // namespace

ModeBlock make_block(int p, double phi, cdouble coupling, double h, double gamma,
                     AnisotropyMode mode) {
  ModeBlock block;
  block.p = p;
  block.phi = phi;
  block.j_real = coupling.real();
  block.j_imag = coupling.imag();
  block.a = h + block.j_real;
  block.b = gamma * block.j_imag;
  block.mode = mode;
  block.eps_sq = mode == AnisotropyMode::NonHermitian ? (block.a - block.b) * (block.a + block.b)
                                                      : block.a * block.a + block.b * block.b;
  return block;
}

std::vector<ModeBlock> build_blocks(const ModelParams& params) {
  const auto couplings = mode_couplings(params);
  return build_blocks(params, couplings);
}

std::vector<ModeBlock> build_blocks(const ModelParams& params, std::span<const cdouble> couplings) {
  const auto phi = mode_angles(params);
  if (couplings.size() != phi.size())
    throw DomainError("build_blocks: " + std::to_string(couplings.size()) + " couplings for " +
                      std::to_string(phi.size()) + " modes");
  std::vector<ModeBlock> blocks;
  blocks.reserve(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    blocks.push_back(make_block(static_cast<int>(i) + 1, phi[i], couplings[i], params.h,
                                params.gamma, params.anisotropy));
  return blocks;
}

cdouble dispersion(const ModeBlock& block) {
  if (block.eps_sq >= 0) return {std::sqrt(block.eps_sq), 0.0};
  return {0.0, std::sqrt(-block.eps_sq)};
}

SpectrumClassification classify_phase(std::span<const ModeBlock> blocks) {
  if (blocks.empty()) throw DomainError("classify_phase: no blocks");
  SpectrumClassification out;
  out.min_eps_sq = blocks.front().eps_sq;
  out.argmin_mode = blocks.front().p;
  for (const auto& block : blocks) {
    if (block.eps_sq < out.min_eps_sq) {
      out.min_eps_sq = block.eps_sq;
      out.argmin_mode = block.p;
    }
  }
  out.label = out.min_eps_sq < -kPhaseTolerance ? Phase::Broken : Phase::Unbroken;
  return out;
}

const char* to_string(Phase phase) { return phase == Phase::Broken ? "Broken" : "Unbroken"; }

StationaryProbe stationary_probe(const ModeBlock& block) {
  const double a = block.a, b = block.b;
  StationaryProbe probe;
  if (a == 0.0 && b == 0.0) {
    probe.state.amplitudes = Vec2(1.0, 0.0);
    probe.eigenvalue = 0.0;
    probe.kind = ProbeKind::Degenerate;
    return probe;
  }

  Vec2 v;
  if (block.mode == AnisotropyMode::Hermitian) {
    const double eps = std::sqrt(block.eps_sq);
    v = pick(Vec2(b, eps - a), Vec2(a + eps, b));
    probe.eigenvalue = -eps;
  } else if (std::abs(block.eps_sq) <= kPhaseTolerance) {
    v = pick(Vec2(a, -b), Vec2(b, -a));
    probe.eigenvalue = 0.0;
    probe.kind = ProbeKind::Coalesced;
  } else if (block.eps_sq > 0) {
    const double eps = std::sqrt(block.eps_sq);
    v = pick(Vec2(a + eps, -b), Vec2(b, eps - a));
    probe.eigenvalue = -eps;
  } else {
    const double kappa = std::sqrt(-block.eps_sq);
    v = pick(Vec2(cdouble(a, -kappa), -b), Vec2(b, cdouble(-a, -kappa)));
    probe.eigenvalue = cdouble(0.0, kappa);
  }
  probe.state.amplitudes = fix_gauge(v);
  return probe;
}

}  // namespace ixy
