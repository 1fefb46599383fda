#pragma once

// Collisional work-extraction protocol: quench-collide steps against a
// stream of freshly prepared thermal qubits, tracking the SM joint state
// together with work, heat and the entropy productions.

#include <optional>
#include <vector>

#include "qthermo/densemath.hpp"
#include "qthermo/states.hpp"
#include "qthermo/thermo.hpp"

namespace qthermo {

// exp(-i g (sx sy - sy sx)) on (S,R): identity outside the |01>,|10>
// block, a cos(2g)/sin(2g) rotation inside it.
Mat xy_unitary(double g);

// Reservoir level keeping the system thermal at beta across one
// quench-collide step; closed form in (E_S, dE, beta, g). Throws when the
// parameter regime makes the log argument non-positive.
double reservoir_energy(double e_s_current, double delta_e, double beta, double g);

struct ProtocolConfig {
  double beta = 1.0;
  double e_initial = 1.0;
  double e_final = 0.1;
  double delta_e = 0.0045;
  double g = 0.1;
  CorrelationFamily correlation;
  bool retain_msr = false;  // keep the current step's 3-qubit state

  int steps() const;
  void validate() const;
};

struct StepResult {
  double work = 0.0;         // quench work this step
  double heat = 0.0;         // reservoir energy change this step
  double e_r = 0.0;          // reservoir level used
  double e_s_next = 0.0;     // post-quench system level
  std::optional<DensityMatrix> msr_final;  // labels S,M,R
};

// One quench-collide step. state_sm has labels S,M; e_s_current is the
// pre-quench level of |1>_S.
std::pair<DensityMatrix, StepResult> step(const DensityMatrix& state_sm,
                                          double e_s_current,
                                          const ProtocolConfig& config);

struct TimeSeries {
  std::vector<int> step_index;
  std::vector<double> e_s;             // post-quench level
  std::vector<double> e_r;
  std::vector<double> work_cum;
  std::vector<double> heat_cum;
  std::vector<double> sigma_s;         // cumulative from t_i
  std::vector<double> sigma_s_given_m;
  std::vector<double> sigma_i;
  std::vector<double> delta_s_s;
  std::vector<double> delta_s_s_given_m;
  std::vector<double> delta_f_s;
  std::vector<double> delta_f_s_given_m;
  std::vector<double> mutual_information_sm;
  std::vector<double> thermal_defect;  // trace distance to thermal fixed point
  DensityMatrix final_state;           // labels S,M

  size_t size() const { return step_index.size(); }
};

TimeSeries run_protocol(const ProtocolConfig& config);

}  // namespace qthermo
