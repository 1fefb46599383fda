#include "qthermo/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qthermo {

Mat QubitHamiltonian::matrix() const {
  Mat h = Mat::Zero(2, 2);
  h(1, 1) = excited_energy;
  return h;
}

DensityMatrix::DensityMatrix(Mat m, std::vector<int> d, std::vector<std::string> l)
    : rho(std::move(m)), dims(std::move(d)), labels(std::move(l)) {
  if (dims.size() != labels.size()) {
    throw std::invalid_argument("DensityMatrix: dims/labels size mismatch");
  }
  long total = 1;
  for (int x : dims) total *= x;
  if (total != rho.rows() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("DensityMatrix: dims do not match matrix size");
  }
  validate();
}

int DensityMatrix::subsystem(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  throw std::invalid_argument("DensityMatrix: no subsystem labeled '" + label + "'");
}

DensityMatrix DensityMatrix::reduce(const std::vector<std::string>& keep) const {
  std::vector<int> idx;
  for (const auto& l : keep) idx.push_back(subsystem(l));
  std::sort(idx.begin(), idx.end());
  Mat red = partial_trace(rho, dims, idx);
  std::vector<int> d;
  std::vector<std::string> l;
  for (int i : idx) { d.push_back(dims[i]); l.push_back(labels[i]); }
  return DensityMatrix(std::move(red), std::move(d), std::move(l));
}

void DensityMatrix::validate() const {
  check_finite(rho, "density matrix");
  if (hermiticity_defect(rho) > 1e-10) {
    throw std::invalid_argument("density matrix not Hermitian within 1e-10");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10) {
    throw std::invalid_argument("density matrix trace differs from 1 beyond 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Mat> s(0.5 * (rho + rho.adjoint()),
                                       Eigen::EigenvaluesOnly);
  if (s.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("density matrix has eigenvalue below -1e-10");
  }
}

DensityMatrix thermal_state(const QubitHamiltonian& h, double beta,
                            const std::string& label) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("thermal_state: beta must be finite and >= 0");
  }
  const double p = 1.0 / (1.0 + std::exp(-beta * h.excited_energy));
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = 1.0 - p;
  return DensityMatrix(std::move(m), {2}, {label});
}

DensityMatrix classical_corr_state(double p, double eps_c) {
  if (!(eps_c >= 0.0 && eps_c <= 1.0)) {
    throw std::invalid_argument("classical_corr_state: eps_c outside [0,1]");
  }
  const double e = eps_c * p * (1.0 - p);
  const double d0 = p - e, d3 = 1.0 - p - e;
  for (double d : {d0, e, e, d3}) {
    if (d < 0.0) {
      throw std::invalid_argument(
          "classical_corr_state: negative diagonal entry " + std::to_string(d));
    }
  }
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = d0;
  m(1, 1) = e;
  m(2, 2) = e;
  m(3, 3) = d3;
  return DensityMatrix(std::move(m), {2, 2}, {"S", "M"});
}

DensityMatrix quantum_corr_state(double p, double eps_q) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantum_corr_state: p outside (0,1)");
  if (!(eps_q >= 0.0 && eps_q <= 1.0)) {
    throw std::invalid_argument("quantum_corr_state: eps_q outside [0,1]");
  }
  const double c = std::sqrt(p * (1.0 - p));
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = p;
  m(3, 3) = 1.0 - p;
  m(0, 3) = c * (1.0 - eps_q);
  m(3, 0) = c * (1.0 - eps_q);
  Eigen::SelfAdjointEigenSolver<Mat> s(m, Eigen::EigenvaluesOnly);
  if (s.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("quantum_corr_state: state not positive semidefinite");
  }
  return DensityMatrix(std::move(m), {2, 2}, {"S", "M"});
}

DensityMatrix correlated_state(const CorrelationFamily& family) {
  switch (family.kind) {
    case CorrelationKind::classical:
      return classical_corr_state(family.p, family.noise);
    case CorrelationKind::quantum:
      return quantum_corr_state(family.p, family.noise);
    case CorrelationKind::product:
      return classical_corr_state(family.p, 1.0);
  }
  throw std::invalid_argument("correlated_state: unknown kind");
}

const char* to_string(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::classical: return "classical";
    case CorrelationKind::quantum: return "quantum";
    case CorrelationKind::product: return "product";
  }
  return "?";
}

CorrelationKind correlation_kind_from_string(const std::string& s) {
  if (s == "classical") return CorrelationKind::classical;
  if (s == "quantum") return CorrelationKind::quantum;
  if (s == "product") return CorrelationKind::product;
  throw std::invalid_argument("unknown correlation kind '" + s + "'");
}

}  // namespace qthermo
