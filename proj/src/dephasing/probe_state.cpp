#include <cmath>
#include <complex>
#include <string>

#include "dephaseprobe/dephasing.hpp"
#include "dephaseprobe/errors.hpp"

namespace dephaseprobe::dephasing {

namespace {

constexpr double kHermiticityTolerance = 1e-12;
constexpr double kTraceTolerance = 1e-12;
constexpr double kPositivityTolerance = 1e-10;

void validate_state(const std::vector<double>& energies, const ProbeState::Matrix& rho) {
  const auto d = static_cast<Eigen::Index>(energies.size());
  if (d < 2) throw InvariantError("ProbeState: dimension must be >= 2");
  if (rho.rows() != d || rho.cols() != d) {
    throw InvariantError("ProbeState: rho must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  for (Eigen::Index n = 0; n < d; ++n) {
    if (!std::isfinite(energies[n])) throw InvariantError("ProbeState: energies must be finite");
    if (n > 0 && energies[n] < energies[n - 1]) {
      throw InvariantError("ProbeState: energies must be ascending");
    }
  }
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index k = n; k < d; ++k) {
      if (std::abs(rho(n, k) - std::conj(rho(k, n))) > kHermiticityTolerance) {
        throw InvariantError("ProbeState: rho is not Hermitian");
      }
    }
  }
  const std::complex<double> trace = rho.trace();
  if (std::abs(trace - 1.0) > kTraceTolerance) {
    throw InvariantError("ProbeState: trace(rho) must be 1");
  }
  const Eigen::SelfAdjointEigenSolver<ProbeState::Matrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success || solver.eigenvalues().minCoeff() < -kPositivityTolerance) {
    throw InvariantError("ProbeState: rho is not positive semidefinite");
  }
}

}  // namespace

void BathModel::validate() const {
  if (!(s > 0.0)) throw DomainError("BathModel: ohmicity s must be > 0");
  if (!(T >= 0.0)) throw DomainError("BathModel: temperature must be >= 0");
}

BathRegime BathModel::regime() const {
  if (s < 1.0) return BathRegime::SubOhmic;
  if (s > 1.0) return BathRegime::SuperOhmic;
  return BathRegime::Ohmic;
}

void QubitPreparation::validate() const {
  if (!(phi >= 0.0 && phi <= mathkern::kPi / 2.0)) {
    throw DomainError("QubitPreparation: phi must lie in [0, pi/2]");
  }
  if (!(Omega > 0.0)) throw DomainError("QubitPreparation: Omega must be > 0");
}

double QubitPreparation::initial_coherence() const { return std::sin(2.0 * phi); }

ProbeState::ProbeState(std::vector<double> energies, Matrix rho)
    : energies_(std::move(energies)), rho_(std::move(rho)) {
  validate_state(energies_, rho_);
}

ProbeState ProbeState::maximally_coherent(std::vector<double> energies) {
  const auto d = static_cast<Eigen::Index>(energies.size());
  if (d < 2) throw InvariantError("ProbeState: dimension must be >= 2");
  // |psi> = sum_n |e_n> / sqrt(d)
  Matrix rho = Matrix::Constant(d, d, std::complex<double>(1.0 / static_cast<double>(d), 0.0));
  return ProbeState(std::move(energies), std::move(rho));
}

ProbeState ProbeState::equispaced_maximally_coherent(int d, double Omega) {
  if (d < 2) throw DomainError("equispaced_maximally_coherent: d must be >= 2");
  if (!(Omega > 0.0)) throw DomainError("equispaced_maximally_coherent: Omega must be > 0");
  std::vector<double> energies(static_cast<std::size_t>(d));
  for (int n = 0; n < d; ++n) energies[static_cast<std::size_t>(n)] = Omega * n;
  return maximally_coherent(std::move(energies));
}

ProbeState ProbeState::qubit(const QubitPreparation& prep) {
  prep.validate();
  const double c = std::cos(prep.phi);
  const double s = std::sin(prep.phi);
  Matrix rho(2, 2);
  rho << c * c, c * s, c * s, s * s;
  return ProbeState({0.0, prep.Omega}, std::move(rho));
}

ProbeState apply_dephasing(const ProbeState& state, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("apply_dephasing: gamma must be >= 0");
  const auto& energies = state.energies();
  ProbeState::Matrix out = state.rho();
  const Eigen::Index d = out.rows();
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index k = n + 1; k < d; ++k) {
      const double gap = energies[n] - energies[k];
      const double factor = std::exp(-gamma * gap * gap);
      out(n, k) *= factor;
      out(k, n) *= factor;
    }
  }
  // Diagonal untouched and both triangles scaled by the same real factor, so
  // trace and Hermiticity carry over bit for bit.
  return ProbeState(ProbeState::Unchecked{}, energies, std::move(out));
}

double coherence(const ProbeState& state) {
  const auto& rho = state.rho();
  double total = 0.0;
  for (Eigen::Index n = 0; n < rho.rows(); ++n) {
    for (Eigen::Index k = 0; k < rho.cols(); ++k) {
      if (n != k) total += std::abs(rho(n, k));
    }
  }
  return total;
}

double residual_coherence_equispaced(int d, double gamma, double Omega) {
  if (d < 2) throw DomainError("residual_coherence_equispaced: d must be >= 2");
  if (!(gamma >= 0.0)) throw DomainError("residual_coherence_equispaced: gamma must be >= 0");
  if (!(Omega > 0.0)) throw DomainError("residual_coherence_equispaced: Omega must be > 0");
  // Level pairs separated by j steps occur (d - j) times in each triangle.
  double sum = 0.0;
  for (int j = 1; j < d; ++j) {
    const double gap = j * Omega;
    sum += static_cast<double>(d - j) * std::exp(-gamma * gap * gap);
  }
  return 2.0 * sum / static_cast<double>(d);
}

}  // namespace dephaseprobe::dephasing
