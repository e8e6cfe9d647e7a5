#include <algorithm>
#include <cmath>
#include <complex>

#include "dephaseprobe/errors.hpp"
#include "dephaseprobe/metrology.hpp"

namespace dephaseprobe::metrology {

namespace {
constexpr double kNullSubspace = 1e-14;
constexpr double kDerivativeTolerance = 1e-10;
}  // namespace

double qfi_spectral(const dephasing::ProbeState& state, const dephasing::ProbeState::Matrix& drho) {
  const auto& rho = state.rho();
  if (drho.rows() != rho.rows() || drho.cols() != rho.cols()) {
    throw InvariantError("qfi_spectral: derivative dimension does not match the state");
  }
  if ((drho - drho.adjoint()).cwiseAbs().maxCoeff() > kDerivativeTolerance) {
    throw InvariantError("qfi_spectral: derivative is not Hermitian");
  }
  if (std::abs(drho.trace()) > kDerivativeTolerance) {
    throw InvariantError("qfi_spectral: derivative is not traceless");
  }

  const Eigen::SelfAdjointEigenSolver<dephasing::ProbeState::Matrix> solver(rho);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("qfi_spectral: eigendecomposition failed", std::nan(""),
                           std::numeric_limits<double>::infinity());
  }
  const Eigen::VectorXd values = solver.eigenvalues().cwiseMax(0.0);
  const auto& vectors = solver.eigenvectors();
  // <phi_k| d rho |phi_n>; the diagonal carries the eigenvalue derivatives and
  // the off-diagonal (rho_n - rho_k) <phi_k| d phi_n>.
  const dephasing::ProbeState::Matrix projected = vectors.adjoint() * drho * vectors;

  double qfi = 0.0;
  const Eigen::Index d = values.size();
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double weight = values(n) + values(k);
      if (weight < kNullSubspace) continue;
      qfi += 2.0 * std::norm(projected(k, n)) / weight;
    }
  }
  return qfi;
}

}  // namespace dephaseprobe::metrology
