#pragma once

// Feedback-demon experiments: random two-qubit gates in canonical
// (Weyl-chamber) form acting on a memory-system pair, followed by either
// unitary controlled feedback or measure-then-act feedback on the memory.
//
// Register order here is (M, S): memory is the most significant qubit,
// matching the controlled-gate block structure.

#include <array>
#include <vector>

#include "qthermo/densemath.hpp"
#include "qthermo/random.hpp"
#include "qthermo/states.hpp"

namespace qthermo {

enum class FeedbackKind { unitary, measurement };

struct NonlocalParams {
  double c_x = 0.0, c_y = 0.0, c_z = 0.0;
};

// Reorder into pi/4 >= c_x >= c_y >= |c_z|.
NonlocalParams fold_weyl(const NonlocalParams& params);

// Uniform in [0, pi/4]^3, then folded.
NonlocalParams sample_nonlocal(Rng& rng);

// (u1 (x) u2) exp(i sum_k c_k sigma_k (x) sigma_k) (u3 (x) u4)
Mat canonical_two_qubit(const NonlocalParams& params, const Mat& u1,
                        const Mat& u2, const Mat& u3, const Mat& u4);

// Controlled composition Lambda^(1) o Lambda^(0): memory |k> steers u_k
// onto the system; block-diagonal 4x4 on (M, S).
Mat unitary_feedback(const Mat& u0, const Mat& u1);

struct MeasurementFeedback {
  std::array<double, 2> probability{};
  std::array<DensityMatrix, 2> branch;  // normalized post-states, labels M,S
  DensityMatrix recombined;             // dephased-control channel output
};

// Projective measurement in the eigenbasis of the memory marginal,
// then u_k on the system per branch.
MeasurementFeedback measurement_feedback(const DensityMatrix& state_ms,
                                         const Mat& u0, const Mat& u1);

struct DemonRecord {
  NonlocalParams params;
  double delta_s_s = 0.0;                  // S_S(t2) - S_S(t1)
  double mutual_info_final = 0.0;          // I_{S:M}(t2)
  double memory_entropy_final = 0.0;       // S_M(t2)
  double dephased_mutual_info_final = 0.0; // memory dephased in its eigenbasis
  double joint_entropy_final = 0.0;        // S_SM(t2) of the final joint state
  FeedbackKind feedback_kind = FeedbackKind::unitary;
};

// Memory starts pure |0>, system thermal at (h_s, beta). Each sample draws
// a random canonical gate (folded uniform nonlocals, Haar locals) for the
// interaction and Haar u0/u1 for the feedback.
std::vector<DemonRecord> demon_scatter(double beta, const QubitHamiltonian& h_s,
                                       int num_samples, uint64_t seed,
                                       FeedbackKind kind);

}  // namespace qthermo
