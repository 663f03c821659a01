#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ixy/analysis.hpp"
#include "ixy/dynamics.hpp"
#include "ixy/metrology.hpp"

using namespace ixy;

namespace {

const cdouble I(0, 1);

Vec2 random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Vec2(cdouble(g(rng), g(rng)), cdouble(g(rng), g(rng)));
}

// Pure-state QFI 4 [<dpsi|dpsi> - |<psi|dpsi>|^2] on the explicitly
// normalized state psi = phi / |phi| and its exact derivative.
double normalized_qfi(const Vec2& phi, const Vec2& dphi) {
  const double n = phi.squaredNorm();
  const double dn = 2 * phi.dot(dphi).real();
  const Vec2 psi = phi / std::sqrt(n);
  const Vec2 dpsi = dphi / std::sqrt(n) - phi * (0.5 * dn / std::pow(n, 1.5));
  return 4 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
}

// Unitary QFI for a Hermitian block from the spectral decomposition of M:
// d/dtheta exp(-i M t) = V (G o V^T dM V) V^T with the divided differences G.
double textbook_unitary_qfi(const ModeBlock& block, double t, Parameter theta) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(block_matrix(block));
  const Eigen::Matrix2d v = solver.eigenvectors();
  const Eigen::Vector2d lam = solver.eigenvalues();
  const Eigen::Matrix2d dm = v.transpose() * generator_derivative(block, theta) * v;
  Mat2 g;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const cdouble ej = std::exp(-I * lam(j) * t), ek = std::exp(-I * lam(k) * t);
      g(j, k) = std::abs(lam(j) - lam(k)) > 1e-12 ? (ej - ek) / (lam(j) - lam(k)) : -I * t * ej;
    }
  }
  const Mat2 du = v.cast<cdouble>() * g.cwiseProduct(dm.cast<cdouble>()) * v.transpose().cast<cdouble>();
  Mat2 u = Mat2::Zero();
  for (int j = 0; j < 2; ++j) u += std::exp(-I * lam(j) * t) * (v.col(j) * v.col(j).transpose()).cast<cdouble>();
  const Vec2 psi = u.col(0), dpsi = du.col(0);
  return 4 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
}

ModelParams chain(int N, int Z, double gamma, double h) {
  ModelParams p;
  p.N = N;
  p.Z = Z;
  p.gamma = gamma;
  p.h = h;
  return p;
}

}  // namespace

TEST_CASE("mode QFI examples") {
  CHECK(mode_qfi(Vec2(0.3, cdouble(0.1, 2)), Vec2::Zero()) == 0.0);
  const cdouble c(0.7, -1.1);
  CHECK(mode_qfi(Vec2(1.0, 0.0), Vec2(0.0, c)) == doctest::Approx(4 * std::norm(c)));
  CHECK(mode_qfi(Vec2(1.0, 0.0), Vec2(I * 0.8, 0.0)) == 0.0);
  CHECK_THROWS_AS(mode_qfi(Vec2::Zero(), Vec2(1.0, 0.0)), DomainError);
}

TEST_CASE("mode QFI equals the normalized-state formula") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const Vec2 phi = random_vec(rng), dphi = random_vec(rng);
    const double ref = normalized_qfi(phi, dphi);
    CHECK(mode_qfi(phi, dphi) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("mode QFI is invariant under unnormalized gauge changes") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const Vec2 phi = random_vec(rng), dphi = random_vec(rng);
    const cdouble c = random_vec(rng)(0), c2 = random_vec(rng)(1);
    const double base = mode_qfi(phi, dphi);
    CHECK(mode_qfi(c * phi, c * dphi + c2 * phi) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("dynamical QFI vanishes at t = 0") {
  for (auto theta : {Parameter::Field, Parameter::Anisotropy}) CHECK(dynamical_qfi(chain(64, 3, 0.3, -0.7), 0.0, theta).value == 0.0);
}

TEST_CASE("dynamical QFI is additive over modes") {
  for (auto [Z, h, t] : {std::tuple{1, -0.7, 3.0}, {4, -1.5, 40.0}, {32, -0.5, 500.0}}) {
    const auto p = chain(128, Z, 0.3, h);
    const auto blocks = build_blocks(p);
    for (auto theta : {Parameter::Field, Parameter::Anisotropy}) {
      long double reversed = 0;
      for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        const auto tr = evolve_mode_derivative(*it, t, theta);
        reversed += mode_qfi(tr.state.amplitudes, tr.dstate);
      }
      const double total = dynamical_qfi(p, t, theta).value;
      CHECK(std::abs(total - static_cast<double>(reversed)) <= 1e-12 * total);
    }
  }
}

TEST_CASE("Hermitian benchmark matches unitary evolution") {
  auto p = chain(64, 4, 0.3, -0.7);
  p.anisotropy = AnisotropyMode::Hermitian;
  const auto blocks = build_blocks(p);
  for (double t : {0.4, 3.0, 200.0}) {
    for (auto theta : {Parameter::Field, Parameter::Anisotropy}) {
      double ref = 0;
      for (const auto& b : blocks) {
        CHECK(std::abs(evolve_mode(b, t).log_norm) < 1e-10);
        ref += textbook_unitary_qfi(b, t, theta);
      }
      CHECK(dynamical_qfi(p, t, theta).value == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("series equals pointwise evaluation") {
  const auto p = chain(256, 2, 0.3, -0.7);
  const std::vector<double> times = {0.01, 0.5, 2.0, 300.0};
  const auto series = dynamical_qfi_series(p, times, Parameter::Field);
  REQUIRE(series.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(series[i].x == times[i]);
    CHECK(series[i].value == dynamical_qfi(p, times[i], Parameter::Field).value);
    CHECK(series[i].protocol == Protocol::Dynamical);
  }
}

TEST_CASE("QFI clipping") {
  CHECK(clip_qfi(2.5) == 2.5);
  CHECK(clip_qfi(-5e-11) == 0.0);
  CHECK_THROWS_AS(clip_qfi(-1e-6), NumericalError);
}

TEST_CASE("stationary QFI in the Hermitian limit") {
  const auto p = chain(64, 2, 0.0, -0.7);
  const auto r = stationary_qfi(p, Parameter::Anisotropy, 1e-6);
  CHECK(std::isfinite(r.sample.value));
  CHECK(r.sample.value > 0);
  CHECK(r.straddling_modes == 0);
  CHECK(r.sample.protocol == Protocol::Stationary);
}

TEST_CASE("stationary QFI grows toward the exceptional point") {
  auto p = chain(1024, 1, 0.5, 0);
  const double h_e = find_exceptional_point(p, -1.2, -0.9).h_e;
  for (double side : {1.0, -1.0}) {
    double previous = 0;
    for (double dh : {1e-2, 1e-3, 1e-4}) {
      p.h = h_e + side * dh;
      const double f = stationary_qfi(p, Parameter::Field, dh / 10).sample.value;
      CHECK(f > previous);
      previous = f;
    }
  }
}

TEST_CASE("stationary QFI ignores per-mode probe phases") {
  const auto p = chain(64, 2, 0.5, -1.3);
  const auto blocks = build_blocks(p);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> angle(0, 6.283185307179586);
  const double d = 1e-5;
  for (const auto& b : blocks) {
    const auto plus = make_block(b.p, b.phi, {b.j_real, b.j_imag}, p.h + d, p.gamma, b.mode);
    const auto minus = make_block(b.p, b.phi, {b.j_real, b.j_imag}, p.h - d, p.gamma, b.mode);
    const Vec2 v = stationary_probe(b).state.amplitudes;
    const Vec2 dv = (stationary_probe(plus).state.amplitudes - stationary_probe(minus).state.amplitudes) / (2 * d);
    const cdouble c = std::polar(1.0, angle(rng));
    CHECK(mode_qfi(c * v, c * dv) == doctest::Approx(mode_qfi(v, dv)).epsilon(1e-12));
  }
}

TEST_CASE("stationary QFI flags modes straddling coalescence") {
  auto p = chain(256, 1, 0.5, 0);
  const double h_e = find_exceptional_point(p, -1.2, -0.9, 1e-12).h_e;
  p.h = h_e;
  const auto r = stationary_qfi(p, Parameter::Field, 1e-6);
  CHECK(r.straddling_modes >= 1);
  p.h = -2.0;
  CHECK(stationary_qfi(p, Parameter::Field, 1e-6).straddling_modes == 0);
  CHECK_THROWS_AS(stationary_qfi(p, Parameter::Field, 0.0), DomainError);
}

TEST_CASE("stationary step default") {
  CHECK(default_stationary_step(-0.3) == 1e-6);
  CHECK(default_stationary_step(-3.0) == doctest::Approx(3e-6));
}

TEST_CASE("ratio is one without anisotropy") {
  const auto r = qfi_ratio_time_avg(chain(64, 2, 0.0, -0.7), Parameter::Anisotropy, 10, 20, 11);
  CHECK(r.n_samples == 11);
  CHECK(r.n_dropped == 0);
  CHECK(r.mean_ratio == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& s : r.per_sample) CHECK(s.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.per_sample.front().t == 10);
  CHECK(r.per_sample.back().t == 20);
}

TEST_CASE("ratio averages the trapezoid rule over the window") {
  const auto p = chain(64, 1, 0.3, -1.5);
  const auto r = qfi_ratio_time_avg(p, Parameter::Field, 5, 9, 5);
  double integral = 0;
  for (std::size_t i = 1; i < r.per_sample.size(); ++i)
    integral += 0.5 * (r.per_sample[i].ratio + r.per_sample[i - 1].ratio);
  CHECK(r.mean_ratio == doctest::Approx(integral / 4).epsilon(1e-14));
  CHECK(r.mean_ratio > 0);
  for (const auto& s : r.per_sample) {
    CHECK(s.qfi_nh == doctest::Approx(dynamical_qfi(p, s.t, Parameter::Field).value));
    CHECK(s.qfi_h == doctest::Approx(dynamical_qfi(hermitian_counterpart(p), s.t, Parameter::Field).value));
  }
}

TEST_CASE("ratio argument checks") {
  const auto p = chain(16, 1, 0.3, -0.7);
  CHECK_THROWS_AS(qfi_ratio_time_avg(p, Parameter::Field, 0, 1, 5), DomainError);
  CHECK_THROWS_AS(qfi_ratio_time_avg(p, Parameter::Field, 2, 1, 5), DomainError);
  CHECK_THROWS_AS(qfi_ratio_time_avg(p, Parameter::Field, 1, 2, 1), DomainError);
  // Without pairing the vacuum is an eigenstate, so the field QFI vanishes everywhere.
  auto frozen = chain(16, 1, 0.0, -0.7);
  CHECK_THROWS_AS(qfi_ratio_time_avg(frozen, Parameter::Field, 1, 2, 3), NumericalError);
}
