#pragma once

// Seeded random process instances shared by the verify command and the
// property-test suites.

#include "qthermo/demon.hpp"
#include "qthermo/random.hpp"
#include "qthermo/states.hpp"

namespace qthermo {

struct ProcessInstance {
  DensityMatrix rho_sm;  // labels S,M
  double beta = 1.0;
  QubitHamiltonian h_r{1.0};
  Mat u_sr;
};

inline CorrelationFamily sample_family(Rng& rng) {
  CorrelationFamily f;
  f.kind = uniform01(rng) < 0.5 ? CorrelationKind::classical : CorrelationKind::quantum;
  f.p = uniform(rng, 0.15, 0.85);
  f.noise = uniform01(rng);
  return f;
}

inline Mat sample_collision_unitary(Rng& rng) {
  if (uniform01(rng) < 0.5) return haar_unitary(4, rng);
  return canonical_two_qubit(sample_nonlocal(rng), haar_unitary(2, rng),
                             haar_unitary(2, rng), haar_unitary(2, rng),
                             haar_unitary(2, rng));
}

inline ProcessInstance sample_instance(Rng& rng) {
  ProcessInstance inst;
  inst.rho_sm = correlated_state(sample_family(rng));
  inst.beta = uniform(rng, 0.2, 2.0);
  inst.h_r = QubitHamiltonian{uniform(rng, 0.1, 2.0)};
  inst.u_sr = sample_collision_unitary(rng);
  return inst;
}

// Full-support initial states only: the trajectory fluctuation theorems
// need absolute continuity (no hard-zero populations), which the quantum
// family violates in the product basis.
inline ProcessInstance sample_full_support_instance(Rng& rng) {
  ProcessInstance inst;
  if (uniform01(rng) < 0.5) {
    inst.rho_sm = classical_corr_state(uniform(rng, 0.2, 0.8), uniform(rng, 0.1, 0.9));
  } else {
    inst.rho_sm = DensityMatrix(random_density(4, rng), {2, 2}, {"S", "M"});
  }
  inst.beta = uniform(rng, 0.2, 2.0);
  inst.h_r = QubitHamiltonian{uniform(rng, 0.1, 2.0)};
  inst.u_sr = sample_collision_unitary(rng);
  return inst;
}

}  // namespace qthermo
