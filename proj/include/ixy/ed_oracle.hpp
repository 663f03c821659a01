#ifndef IXY_ED_ORACLE_HPP_
#define IXY_ED_ORACLE_HPP_

#include <Eigen/Core>

#include "ixy/model.hpp"
#include "ixy/types.hpp"

namespace ixy {

/// Sign of the exchange term in the spin Hamiltonian.
/// BlockConsistent: H = -sum_j sum_r J_r [c+ X Z..Z X + c- Y Z..Z Y] + (h/2) sum_j Z_j,
/// which reduces exactly to the momentum blocks at field h.
/// AsPrinted: the same with +sum_j sum_r, equivalent to the blocks at -h.
enum class SpinConvention { BlockConsistent, AsPrinted };

inline constexpr int kMaxDenseSites = 12;

/// Dense operator on N spins. Basis index bit j is site j; bit value 0 is
/// the sigma^z = +1 state.
struct DenseOperator {
  int sites = 0;
  Eigen::MatrixXcd matrix;

  Eigen::Index dim() const { return matrix.rows(); }
};

/// c+- = (1 +- i gamma)/4, or (1 +- gamma)/4 in Hermitian mode. Bonds wrap
/// periodically; at Z = N/2 each antipodal bond appears twice.
/// Throws DomainError for N > kMaxDenseSites.
DenseOperator build_spin_hamiltonian(const ModelParams& params,
                                     SpinConvention convention = SpinConvention::BlockConsistent);

/// Diagonal of prod_j Z_j.
Eigen::VectorXd parity_diagonal(int sites);

/// exp(A) by Pade-13 scaling and squaring.
Eigen::MatrixXcd expm_pade(const Eigen::MatrixXcd& a);
/// exp(A) = V exp(D) V^-1 from a complex eigendecomposition. Only reliable
/// when A is diagonalizable and V is well conditioned.
Eigen::MatrixXcd expm_eigen(const Eigen::MatrixXcd& a);

enum class ExpmMethod { Pade, Eigen };

struct DenseState {
  Eigen::VectorXcd psi;  // normalized
  double log_norm = 0;
};

/// normalize(exp(-i H t) |0...0>).
DenseState dense_evolve(const DenseOperator& h, double t, ExpmMethod method = ExpmMethod::Pade);

struct DenseQfi {
  double value = 0;
  double fd_step = 0;
  bool straddle = false;  // momentum-space phase changes across the stencil
};

/// QFI of the evolved state by central differences in theta (one Richardson
/// step), after fixing the phase of the component that is largest in the
/// unperturbed state. fd_step <= 0 selects 1e-5 max(1, |theta|).
DenseQfi dense_evolve_qfi(const ModelParams& params, double t, Parameter theta, double fd_step = 0,
                          SpinConvention convention = SpinConvention::BlockConsistent);

}  // namespace ixy

#endif  // IXY_ED_ORACLE_HPP_
