#pragma once

// Exact two-point-measurement trajectory engine for one collision of a
// system-memory pair with a thermal reservoir qubit. Outcome spaces are
// fully enumerated; sampling lives in the emulator.
//
// Global scheme: joint SM eigenbasis measurements, outcomes (n,r,n',r').
// Local scheme: product eigenbasis measurements, outcomes (a,b,r,a',r')
// with the memory measured once at the initial time.

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qthermo/densemath.hpp"
#include "qthermo/states.hpp"

namespace qthermo {

enum class Scheme { global, local };
enum class Direction { forward, backward };

enum class FunctionalKind {
  sigma_s_given_m_global,  // ln(P_n/P~n') + ln(P_r/P~r')
  sigma_s,                 // ln(P_a/P~a') + ln(P_r/P~r')
  sigma_i_global,          // global conditional minus sigma_s; needs a
                           // product-factorizable SM eigenbasis
  sigma_s_given_m_local,   // ln(P_{a|b}/P~_{a'|b}) + ln(P_r/P~r')
  sigma_i_local,           // local conditional minus sigma_s
};

struct GlobalOutcome { int n, r, n_prime, r_prime; };
struct LocalOutcome { int a, b, r, a_prime, r_prime; };

// Everything derived once from (rho_SM^i, thermal R, U_SR).
struct SpectralData {
  double beta = 1.0;
  double e_r_level = 0.0;           // reservoir |1> level
  std::array<double, 2> p_r{};      // thermal populations
  std::array<double, 2> e_r{};      // level energies {0, E_R}

  EigenSystem sm_initial, sm_final; // P_n / P~n' with eigenvectors
  EigenSystem s_initial, s_final, m_initial;
  Eigen::Matrix2d p_ab, p_afb;      // <a,b|rho_i|a,b>, <a',b|rho_f|a',b>

  Mat u_sr;                         // 4x4 on (S,R)
  DensityMatrix rho_sm_i, rho_sm_f; // labels S,M
  Mat rho_r_f;
  double heat_q_r = 0.0;

  // |<a',b'| n>| pattern: index of the product state each global
  // eigenvector factorizes into, or -1 when it does not factorize.
  std::array<int, 4> product_index_i{};
  std::array<int, 4> product_index_f{};
};

struct TrajectoryDistribution {
  Direction direction = Direction::forward;
  Scheme scheme = Scheme::global;
  std::vector<double> prob;  // global: 64 entries, local: 32
  std::shared_ptr<const SpectralData> data;

  double total() const;
};

struct StochasticFunctional {
  FunctionalKind kind;
  Scheme scheme;
  std::vector<double> value;   // aligned with distribution indexing
  std::vector<bool> defined;   // false when a population ratio is undefined
};

struct AveragesReport {
  double avg_sigma_s_given_m_global = 0.0;
  double avg_sigma_s = 0.0;
  double avg_sigma_s_given_m_local = 0.0;
  double avg_sigma_i_local = 0.0;
  double sigma_s_given_m_ensemble = 0.0;   // Sigma_{S|M}
  double sigma_s_ensemble = 0.0;           // Sigma_S
  double sigma_i_ensemble = 0.0;           // Sigma_I
  double dephased_entropy_change = 0.0;    // S(rho~f) - S(rho~i)
  double delta_j = 0.0;                    // J(t_f) - J(t_i)
  double heat_q_r = 0.0;
};

struct DetailedFtBin {
  double sigma = 0.0;
  double p_forward = 0.0;
  double p_backward_neg = 0.0;
  bool ratio_defined = false;
  double log_ratio = 0.0;
};

struct DetailedFt {
  std::vector<DetailedFtBin> bins;
  std::vector<double> excluded_sigmas;  // bins with an empty side
};

// Indexing helpers shared by distributions and functionals.
inline int global_index(int n, int r, int n_prime, int r_prime) {
  return ((n * 2 + r) * 4 + n_prime) * 2 + r_prime;
}
inline int local_index(int a, int b, int r, int a_prime, int r_prime) {
  return (((a * 2 + b) * 2 + r) * 2 + a_prime) * 2 + r_prime;
}
GlobalOutcome global_outcome(int index);
LocalOutcome local_outcome(int index);

class TwoPointProcess {
 public:
  // rho_sm_i labeled S,M; the reservoir starts thermal at (h_r, beta);
  // u_sr is 4x4 on (S,R).
  TwoPointProcess(const DensityMatrix& rho_sm_i, double beta,
                  const QubitHamiltonian& h_r, const Mat& u_sr);

  // Same, but with caller-chosen orthonormal eigenbases for the joint SM
  // initial/final states (used to probe degenerate spectra).
  TwoPointProcess(const DensityMatrix& rho_sm_i, double beta,
                  const QubitHamiltonian& h_r, const Mat& u_sr,
                  const Mat& sm_basis_initial, const Mat& sm_basis_final);

  const SpectralData& data() const { return *data_; }

  TrajectoryDistribution forward(Scheme scheme) const;
  TrajectoryDistribution backward(Scheme scheme) const;

  StochasticFunctional stochastic_values(FunctionalKind kind) const;

  // Exact-enumeration <exp(-sigma)> over the forward distribution.
  double ift(FunctionalKind kind) const;
  // <exp(-sigma)> restricted to the memory outcome b (local scheme).
  double ift_conditioned_on_b(int b) const;
  // <exp(-sigma_i)> restricted to one system-reservoir trajectory.
  double ift_conditioned_on_sr(int a, int r, int a_prime, int r_prime) const;

  AveragesReport averages_report() const;

  DetailedFt detailed_ft(FunctionalKind kind,
                         std::optional<int> condition_b = std::nullopt) const;

 private:
  void build(const DensityMatrix& rho_sm_i, double beta,
             const QubitHamiltonian& h_r, const Mat& u_sr,
             const Mat* basis_i, const Mat* basis_f);
  std::shared_ptr<SpectralData> data_;
};

}  // namespace qthermo
