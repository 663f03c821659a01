#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ixy/model.hpp"

using namespace ixy;

namespace {

constexpr double pi = std::numbers::pi;

// Independent reference: long double direct sum of sum_r J_r e^{i r phi}.
std::complex<long double> reference_coupling(double alpha, int Z, long double phi) {
  long double kac = 0;
  for (int r = 1; r <= Z; ++r) kac += std::pow(static_cast<long double>(r), -static_cast<long double>(alpha));
  std::complex<long double> sum = 0;
  for (int r = 1; r <= Z; ++r)
    sum += std::pow(static_cast<long double>(r), -static_cast<long double>(alpha)) / kac *
           std::polar(1.0L, r * phi);
  return sum;
}

// Alternating-sum form of the phi = pi gap-closing field.
double alternating_critical_field(double alpha, int Z) {
  double num = 0, den = 0;
  for (int r = 1; r <= Z; ++r) {
    const double w = std::pow(static_cast<double>(r), -alpha);
    num += (r % 2 ? -1.0 : 1.0) * w;
    den += w;
  }
  return -num / den;
}

}  // namespace

TEST_CASE("kac factor") {
  CHECK(kac_factor(1.5, 1) == 1.0);
  CHECK(kac_factor(0.0, 5) == 5.0);
  CHECK(kac_factor(1.0, 4) == doctest::Approx(1.0 + 0.5 + 1.0 / 3 + 0.25).epsilon(1e-15));
  CHECK_THROWS_AS(kac_factor(1.0, 0), DomainError);
  CHECK(kac_factor<long double>(2.0L, 3) == doctest::Approx(1.0 + 0.25 + 1.0 / 9));
}

TEST_CASE("coupling profile examples") {
  CHECK(coupling_profile(3.7, 1).weights == std::vector<double>{1.0});
  const auto uniform = coupling_profile(0.0, 4);
  for (double w : uniform.weights) CHECK(w == 0.25);
  const auto two = coupling_profile(1.0, 2);
  CHECK(two.kac == 1.5);
  CHECK(two.weights[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(coupling_profile(1.0, -2), DomainError);
}

TEST_CASE("Kac normalization and monotone weights") {
  for (double alpha : {0.0, 0.3, 0.8, 1.0, 1.5, 2.0, 3.0, 5.0, 9.0}) {
    for (int Z : {1, 2, 3, 7, 64, 512, 4096}) {
      const auto profile = coupling_profile(alpha, Z);
      long double total = 0;
      for (std::size_t i = 0; i < profile.weights.size(); ++i) {
        total += profile.weights[i];
        CHECK(profile.weights[i] > 0);
        if (i > 0) CHECK(profile.weights[i] <= profile.weights[i - 1]);
      }
      CHECK(std::abs(static_cast<double>(total) - 1.0) < 1e-12);
      CHECK(std::abs(momentum_coupling(profile, 0.0) - cdouble(1, 0)) < 1e-12);
    }
  }
}

TEST_CASE("momentum coupling examples") {
  const auto nn = coupling_profile(1.5, 1);
  for (double phi : {0.0, 0.3, 1.2, 2.9}) {
    CHECK(momentum_coupling(nn, phi).real() == doctest::Approx(std::cos(phi)));
    CHECK(momentum_coupling(nn, phi).imag() == doctest::Approx(std::sin(phi)));
  }
  const auto j = momentum_coupling(coupling_profile(1.0, 2), pi / 2);
  CHECK(j.real() == doctest::Approx(-1.0 / 3).epsilon(1e-14));
  CHECK(j.imag() == doctest::Approx(2.0 / 3).epsilon(1e-14));
}

TEST_CASE("momentum coupling parity") {
  for (int Z : {1, 3, 10}) {
    const auto profile = coupling_profile(1.2, Z);
    for (double phi : {0.1, 0.7, 2.2, 3.0}) {
      const auto plus = momentum_coupling(profile, phi), minus = momentum_coupling(profile, -phi);
      CHECK(std::abs(plus.real() - minus.real()) < 1e-14);
      CHECK(std::abs(plus.imag() + minus.imag()) < 1e-14);
    }
  }
}

TEST_CASE("mode angles") {
  ModelParams p;
  p.N = 4;
  const auto full = mode_angles(p);
  REQUIRE(full.size() == 2);
  CHECK(full[0] == doctest::Approx(pi / 4));
  CHECK(full[1] == doctest::Approx(3 * pi / 4));

  p.N = 8;
  p.mode_range = ModeRange::Reduced;
  const auto reduced = mode_angles(p);
  REQUIRE(reduced.size() == 3);
  CHECK(reduced[2] == doctest::Approx(5 * pi / 8));

  p.N = 1024;
  p.mode_range = ModeRange::Full;
  const auto big = mode_angles(p);
  REQUIRE(big.size() == 512);
  CHECK(big.back() == doctest::Approx(1023 * pi / 1024));
  for (std::size_t i = 0; i < big.size(); ++i) {
    CHECK(big[i] > 0);
    CHECK(big[i] < pi);
    if (i > 0) CHECK(big[i] > big[i - 1]);
  }
}

TEST_CASE("mode couplings match a direct long double sum") {
  for (auto [N, Z, alpha] : {std::tuple{16, 1, 1.5}, {64, 5, 0.8}, {128, 64, 2.0}, {1024, 512, 1.5}}) {
    ModelParams p;
    p.N = N;
    p.Z = Z;
    p.alpha = alpha;
    const auto phi = mode_angles(p);
    const auto j = mode_couplings(p);
    REQUIRE(j.size() == phi.size());
    double worst = 0;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const long double angle = (2.0L * (i + 1) - 1) * std::numbers::pi_v<long double> / N;
      const auto ref = reference_coupling(alpha, Z, angle);
      worst = std::max(worst, static_cast<double>(std::abs(std::complex<long double>(j[i]) - ref)));
    }
    CHECK(worst < 1e-14);
  }
}

TEST_CASE("critical field at zero momentum") {
  CHECK(critical_field_zero() == -1.0);
  for (auto [alpha, Z] : {std::pair{2.0, 7}, {0.5, 3}, {0.0, 12}})
    CHECK(-momentum_coupling(coupling_profile(alpha, Z), 0.0).real() == doctest::Approx(critical_field_zero()).epsilon(1e-14));
}

TEST_CASE("critical field at pi") {
  CHECK(critical_field_pi(2.3, 1) == 1.0);
  CHECK(critical_field_pi(0.0, 2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(critical_field_pi(1.0, 4) == doctest::Approx(0.28).epsilon(1e-14));
  CHECK(alternating_critical_field(1.0, 4) == doctest::Approx(0.28).epsilon(1e-14));
  CHECK_THROWS_AS(critical_field_pi(1.0, 0), DomainError);
  for (double alpha : {0.0, 0.5, 1.0, 2.0, 5.0})
    for (int Z = 1; Z <= 8; ++Z)
      CHECK(std::abs(critical_field_pi(alpha, Z) - alternating_critical_field(alpha, Z)) < 1e-12);
}

TEST_CASE("critical field at pi equals -Re J(pi)") {
  for (double alpha : {0.5, 1.5, 3.0})
    for (int Z : {1, 2, 5, 40})
      CHECK(critical_field_pi(alpha, Z) ==
            doctest::Approx(-momentum_coupling(coupling_profile(alpha, Z), pi).real()).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(validate(p));
  p.N = 7;
  CHECK_THROWS_AS(validate(p), DomainError);
  p.N = 2;
  CHECK_THROWS_AS(validate(p), DomainError);
  p.N = 16;
  p.Z = 9;
  CHECK_THROWS_AS(validate(p), DomainError);
  p.Z = 8;
  CHECK_NOTHROW(validate(p));
  p.alpha = -0.1;
  CHECK_THROWS_AS(validate(p), DomainError);
  p.alpha = 0;
  CHECK_NOTHROW(validate(p));
  p.h = std::nan("");
  CHECK_THROWS_AS(validate(p), DomainError);
}

TEST_CASE("enum names round trip") {
  for (auto m : {AnisotropyMode::NonHermitian, AnisotropyMode::Hermitian})
    CHECK(parse_anisotropy_mode(to_string(m)) == m);
  for (auto r : {ModeRange::Full, ModeRange::Reduced}) CHECK(parse_mode_range(to_string(r)) == r);
  for (auto t : {Parameter::Field, Parameter::Anisotropy}) CHECK(parse_parameter(to_string(t)) == t);
  CHECK_THROWS_AS(parse_mode_range("half"), DomainError);
}

TEST_CASE("parameter accessors") {
  ModelParams p;
  CHECK(p.value_of(Parameter::Field) == p.h);
  CHECK(p.with(Parameter::Anisotropy, 0.9).gamma == 0.9);
  CHECK(p.with(Parameter::Field, -2.0).h == -2.0);
  CHECK(p.with(Parameter::Field, -2.0).gamma == p.gamma);
}
