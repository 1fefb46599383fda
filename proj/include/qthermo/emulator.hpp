#pragma once

// Gate-level circuit construction and shot-noise emulation of the
// hardware experiment: state-preparation circuits, a two-CNOT
// decomposition of the collision unitary, transition-probability
// estimation from sampled counts, and fluctuation-theorem reconstruction
// with replicate error bars.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qthermo/densemath.hpp"
#include "qthermo/random.hpp"

namespace qthermo {

enum class GateKind { ry, phase_s, phase_sdg, hadamard, cnot };

struct Gate {
  GateKind kind = GateKind::ry;
  double theta = 0.0;  // Ry only
  int q0 = 0;          // target (control for CNOT)
  int q1 = 0;          // CNOT target
};

Gate ry(double theta, int q);
Gate phase_s(int q);
Gate phase_sdg(int q);
Gate hadamard(int q);
Gate cnot(int control, int target);

struct Circuit {
  int width = 1;
  std::vector<Gate> gates;  // application order

  Mat matrix() const;                       // full 2^width unitary
  Vec run() const;                          // statevector from |0...0>
  // Measurement distribution over the listed qubits (first listed qubit is
  // the most significant outcome bit).
  std::vector<double> probabilities(const std::vector<int>& qubits) const;
};

// Angles (theta1, theta2) so that the two-qubit preparation circuit
// Ry(theta1) on q0, CNOT(0,1), Ry(theta2) on both reproduces the diagonal
// of classical_corr_state(p, eps_c). Throws with the residual when the
// solve does not converge.
std::pair<double, double> solve_prep_angles(double p, double eps_c);

// Rotation angle preparing a thermal qubit via Ry(theta3) + CNOT purification.
// The compat variant reproduces a published closed form that does not meet
// the thermal-population condition; kept for comparison only.
double thermal_prep_angle(double beta, double e_r, bool compat_formula = false);

Circuit prep_sm_circuit(double theta1, double theta2);   // width 2: (S, M)
Circuit prep_thermal_circuit(double theta3);             // width 2: (R, V)

// Two-CNOT realization of xy_unitary(g) on qubits (q_s, q_r), up to a
// global phase.
Circuit decompose_xy(double g, int q_s = 0, int q_r = 1, int width = 2);

// Row-stochastic matrix T(j,k) = |<k|U|j>|^2.
Eigen::Matrix4d transition_matrix(const Mat& u);

struct ShotConfig {
  long shots_per_rep = 8192;
  int reps = 5;
  uint64_t seed = 1;
  std::optional<double> readout_flip_prob;
};

struct CountsHistogram {
  int n_outcomes = 0;
  int n_bits = 0;
  long shots_per_rep = 0;
  std::vector<std::vector<long>> counts;  // [rep][outcome]

  std::vector<double> frequencies(int rep) const;
  std::vector<double> mean_frequencies() const;
  std::vector<double> std_errors() const;  // across reps
};

// Seeded multinomial sampling from an exact outcome distribution, with
// optional independent per-bit readout flips.
CountsHistogram sample_counts(const std::vector<double>& probs, int n_bits,
                              const ShotConfig& config, Rng& rng);

struct ExperimentConfig {
  double beta_e_s = 1.0;   // dimensionless beta*E for the system qubit
  double eps_c = 0.5;      // classical correlation knob
  double beta_e_r = 0.1;   // dimensionless beta*E for the reservoir qubit
  double g = 1.0;
  ShotConfig shots;
  bool exact = false;      // skip sampling, use exact probabilities
};

// One replicate's estimated probability tables. Outcome index packing is
// (a,b) -> a*2+b, (a,r) -> a*2+r.
struct ProbabilitySet {
  std::array<double, 4> p_ab{};    // initial SM diagonal
  std::array<double, 2> p_r{};     // reservoir populations
  std::array<double, 4> p_fab{};   // final SM diagonal
  std::array<std::array<double, 4>, 4> t_fwd{};  // [in (a,r)][out (a',r')]
  std::array<std::array<double, 4>, 4> t_bwd{};  // [in (a',r')][out (a,r)]
};

struct NamedCounts {
  std::string name;
  CountsHistogram counts;
};

struct ExperimentData {
  ExperimentConfig config;
  std::vector<ProbabilitySet> reps;
  std::vector<NamedCounts> raw_counts;  // empty in exact mode
};

ExperimentData run_experiment(const ExperimentConfig& config);

struct FtEstimate {
  std::string label;
  double estimate = 0.0;
  double std_error = 0.0;
};

struct FtBinPoint {
  std::string label;  // which detailed-FT family the point belongs to
  double sigma = 0.0;
  double log_ratio = 0.0;
  double std_error = 0.0;
};

struct FtReport {
  std::vector<FtEstimate> ifts;      // <exp(-sigma)> per functional/condition
  std::vector<FtEstimate> averages;  // <sigma_s>, <sigma_sm>, <sigma_i>
  std::vector<FtBinPoint> bins;
  std::vector<std::string> warnings; // zero-count exclusions etc.
};

FtReport reconstruct_ft(const ExperimentData& data);

}  // namespace qthermo
