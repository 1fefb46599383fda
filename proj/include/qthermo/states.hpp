#pragma once

// State families: thermal qubits and the classically/quantum correlated
// system-memory states with their noise parameters.

#include <string>
#include <vector>

#include "qthermo/densemath.hpp"

namespace qthermo {

// H = E|1><1|, ground energy 0.
struct QubitHamiltonian {
  double excited_energy = 0.0;
  Mat matrix() const;
};

// Validated density operator with subsystem bookkeeping.
struct DensityMatrix {
  Mat rho;
  std::vector<int> dims;              // most significant subsystem first
  std::vector<std::string> labels;    // e.g. {"S","M"}

  DensityMatrix() = default;
  DensityMatrix(Mat m, std::vector<int> d, std::vector<std::string> l);

  long dim() const { return rho.rows(); }
  int subsystem(const std::string& label) const;

  // Reduced state on the listed subsystems (original relative order).
  DensityMatrix reduce(const std::vector<std::string>& keep) const;

  void validate() const;
};

enum class CorrelationKind { classical, quantum, product };

struct CorrelationFamily {
  CorrelationKind kind = CorrelationKind::classical;
  double p = 0.5;      // ground-state probability of the marginals
  double noise = 0.0;  // eps_c or eps_q; ignored for product
};

// Excited-state Gibbs weight: diag(p, 1-p) with p = 1/(1+exp(-beta E)).
DensityMatrix thermal_state(const QubitHamiltonian& h, double beta,
                            const std::string& label = "S");

// diag(p - e, e, e, 1-p - e) with e = eps_c p(1-p); labels S,M.
DensityMatrix classical_corr_state(double p, double eps_c);

// sqrt(p)|00> + sqrt(1-p)|11> with the eps_q coherence damping; labels S,M.
DensityMatrix quantum_corr_state(double p, double eps_q);

DensityMatrix correlated_state(const CorrelationFamily& family);

const char* to_string(CorrelationKind kind);
CorrelationKind correlation_kind_from_string(const std::string& s);

}  // namespace qthermo
