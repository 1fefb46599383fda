#pragma once

// Ensemble-level thermodynamics of one system-reservoir process step:
// heat, entropy productions, dissipative information, free energies and
// the work/heat bound checks.

#include <optional>

#include "qthermo/densemath.hpp"
#include "qthermo/states.hpp"

namespace qthermo {

struct ProcessRecord {
  DensityMatrix rho_sm_initial;   // labels S,M
  DensityMatrix rho_sm_final;
  Mat rho_r_initial;              // 2x2
  Mat rho_r_final;
  QubitHamiltonian h_r;
  QubitHamiltonian h_s_initial;
  QubitHamiltonian h_s_final;
  double beta = 1.0;
  double work_ext = 0.0;          // signed, work done ON the system

  // When present, cross-checks of Sigma_I against I_{M:R|S} are
  // possible; collisional runs usually drop it to save memory.
  std::optional<DensityMatrix> rho_msr_final;  // labels S,M,R

  void validate() const;
};

struct EntropyBudget {
  double sigma_s = 0.0;
  double sigma_s_given_m = 0.0;
  double sigma_i = 0.0;
  double delta_s_s = 0.0;
  double delta_s_s_given_m = 0.0;
  double heat_q_r = 0.0;
  double delta_f_s = 0.0;
  double delta_f_s_given_m = 0.0;
};

struct BoundsReport {
  bool work_vs_f = false;
  bool work_vs_fcond_plus_tsigma_i = false;
  bool heat_vs_scond_minus_sigma_i = false;
  double margin_work_f = 0.0;        // W - dF_S
  double margin_work_fcond = 0.0;    // W - dF_{S|M} - T Sigma_I
  double margin_heat = 0.0;          // dS_{S|M} - Sigma_I - beta Q_S
};

// Tr[(rho_R^f - rho_R^i) H_R]
double heat_to_reservoir(const ProcessRecord& record);

// Sigma_S = dS_S + beta Q_R
double entropy_production_unconditional(const ProcessRecord& record);

// Sigma_{S|M} = dS_{S|M} + beta Q_R (conditional flux equals the
// unconditional one).
double entropy_production_conditional(const ProcessRecord& record);

// Sigma_I = Sigma_{S|M} - Sigma_S
double dissipative_information(const ProcessRecord& record);

// F_S = Tr(H_S rho_S) - T S_S
double free_energy(const Mat& rho_s, const QubitHamiltonian& h_s, double temperature);

// F_{S|M} = Tr(H_S rho_S) - T S_{S|M}
double conditional_free_energy(const DensityMatrix& rho_sm,
                               const QubitHamiltonian& h_s, double temperature);

EntropyBudget compute_budget(const ProcessRecord& record);

BoundsReport bounds_check(const ProcessRecord& record);

// Builds a record by evolving rho_SM tensor thermal(h_r) under a 4x4
// unitary acting on (S,R); always retains the joint MSR final state.
ProcessRecord evolve_record(const DensityMatrix& rho_sm_i, double beta,
                            const QubitHamiltonian& h_r, const Mat& u_sr,
                            const QubitHamiltonian& h_s_initial,
                            const QubitHamiltonian& h_s_final,
                            double work_ext = 0.0);

}  // namespace qthermo
