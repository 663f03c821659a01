#include "ixy/ed_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ixy/momentum.hpp"

namespace ixy {
namespace {

// sigma^y |0> = i |1>, sigma^y |1> = -i |0>.
cdouble y_factor(unsigned bit) { return bit == 0 ? cdouble(0, 1) : cdouble(0, -1); }

}  // namespace

DenseOperator build_spin_hamiltonian(const ModelParams& params, SpinConvention convention) {
  validate(params);
  const int n = params.N;
  if (n > kMaxDenseSites)
    throw DomainError("build_spin_hamiltonian: N=" + std::to_string(n) + " exceeds " +
                      std::to_string(kMaxDenseSites) + " sites");
  const auto profile = coupling_profile(params.alpha, params.Z);
  const bool hermitian = params.anisotropy == AnisotropyMode::Hermitian;
  const cdouble g = hermitian ? cdouble(params.gamma, 0) : cdouble(0, params.gamma);
  const cdouble c_plus = (1.0 + g) / 4.0, c_minus = (1.0 - g) / 4.0;
  const double sign = convention == SpinConvention::BlockConsistent ? -1.0 : 1.0;

  const Eigen::Index dim = Eigen::Index(1) << n;
  DenseOperator op{n, Eigen::MatrixXcd::Zero(dim, dim)};
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto state = static_cast<unsigned>(s);
    op.matrix(s, s) += params.h / 2 * (n - 2 * std::popcount(state));
    for (int j = 0; j < n; ++j) {
      for (int r = 1; r <= params.Z; ++r) {
        const int k = (j + r) % n;
        unsigned string_mask = 0;
        for (int m = 1; m < r; ++m) string_mask |= 1u << ((j + m) % n);
        const double z_string = std::popcount(state & string_mask) % 2 ? -1.0 : 1.0;
        const unsigned bj = (state >> j) & 1u, bk = (state >> k) & 1u;
        const cdouble xx = 1.0, yy = y_factor(bj) * y_factor(bk);
        const auto target = static_cast<Eigen::Index>(state ^ (1u << j) ^ (1u << k));
        op.matrix(target, s) += sign * profile.weights[static_cast<std::size_t>(r - 1)] * z_string *
                                (c_plus * xx + c_minus * yy);
      }
    }
  }
  return op;
}

Eigen::VectorXd parity_diagonal(int sites) {
  const Eigen::Index dim = Eigen::Index(1) << sites;
  Eigen::VectorXd d(dim);
  for (Eigen::Index s = 0; s < dim; ++s) d(s) = std::popcount(static_cast<unsigned>(s)) % 2 ? -1 : 1;
  return d;
}

Eigen::MatrixXcd expm_pade(const Eigen::MatrixXcd& a) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  const Eigen::MatrixXcd x = a / std::ldexp(1.0, squarings);

  const auto id = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXcd x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
  const Eigen::MatrixXcd u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 +
                                   b[5] * x4 + b[3] * x2 + b[1] * id;
  const Eigen::MatrixXcd u = x * u_inner;
  const Eigen::MatrixXcd v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 +
                             b[2] * x2 + b[0] * id;
  Eigen::MatrixXcd r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = (r * r).eval();
  return r;
}

Eigen::MatrixXcd expm_eigen(const Eigen::MatrixXcd& a) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("expm_eigen: eigendecomposition failed");
  const Eigen::MatrixXcd& vecs = solver.eigenvectors();
  const Eigen::VectorXcd e = solver.eigenvalues().array().exp();
  return vecs * e.asDiagonal() * vecs.inverse();
}

DenseState dense_evolve(const DenseOperator& h, double t, ExpmMethod method) {
  if (t < 0) throw DomainError("dense_evolve: t must be >= 0");
  const Eigen::MatrixXcd gen = cdouble(0, -t) * h.matrix;
  const Eigen::MatrixXcd u = method == ExpmMethod::Pade ? expm_pade(gen) : expm_eigen(gen);
  const Eigen::VectorXcd col = u.col(0);
  const double norm = col.norm();
  if (!(norm >= 1e-300) || !std::isfinite(norm))
    throw NumericalError("dense_evolve: state norm out of range");
  return {col / norm, std::log(norm)};
}

DenseQfi dense_evolve_qfi(const ModelParams& params, double t, Parameter theta, double fd_step,
                          SpinConvention convention) {
  const double value = params.value_of(theta);
  const double d = fd_step > 0 ? fd_step : 1e-5 * std::max(1.0, std::abs(value));
  auto psi = [&](double x) {
    return dense_evolve(build_spin_hamiltonian(params.with(theta, x), convention), t).psi;
  };

  const Eigen::VectorXcd center = psi(value);
  Eigen::Index k = 0;
  center.cwiseAbs().maxCoeff(&k);
  auto gauge = [&](Eigen::VectorXcd v) {
    const cdouble pivot = v(k);
    return Eigen::VectorXcd(v * (std::conj(pivot) / std::abs(pivot)));
  };
  const Eigen::VectorXcd p0 = gauge(center);
  auto diff = [&](double step) {
    return Eigen::VectorXcd((gauge(psi(value + step)) - gauge(psi(value - step))) / (2 * step));
  };
  const Eigen::VectorXcd dp = (4.0 * diff(d / 2) - diff(d)) / 3.0;

  DenseQfi out;
  out.fd_step = d;
  out.value = std::max(0.0, 4 * (dp.squaredNorm() - std::norm(p0.dot(dp))));

  auto phase = [&](double x) {
    const auto blocks = build_blocks(params.with(theta, x));
    return classify_phase(blocks).label;
  };
  out.straddle = phase(value - d) != phase(value + d);
  return out;
}

}  // namespace ixy
