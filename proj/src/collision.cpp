#include "qthermo/collision.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qthermo/infomeasures.hpp"

namespace qthermo {

Mat xy_unitary(double g) {
  const double c = std::cos(2.0 * g), s = std::sin(2.0 * g);
  Mat u = Mat::Identity(4, 4);
  u(1, 1) = c;
  u(1, 2) = s;
  u(2, 1) = -s;
  u(2, 2) = c;
  return u;
}

double reservoir_energy(double e_s_current, double delta_e, double beta, double g) {
  const double c2 = std::cos(2.0 * g) * std::cos(2.0 * g);
  const double s2 = std::sin(2.0 * g) * std::sin(2.0 * g);
  const double es = std::exp(beta * e_s_current);
  const double ed = std::exp(beta * delta_e);
  const double num = (c2 * ed - s2 * es - 1.0) * es;
  const double den = c2 * es - s2 * ed - es * ed;
  const double arg = num / den;
  if (!(arg > 0.0) || !std::isfinite(arg)) {
    throw std::invalid_argument(
        "reservoir_energy: no thermal fixed point for E_S=" +
        std::to_string(e_s_current) + ", dE=" + std::to_string(delta_e) +
        ", beta=" + std::to_string(beta) + ", g=" + std::to_string(g));
  }
  return std::log(arg) / beta;
}

int ProtocolConfig::steps() const {
  return static_cast<int>(std::llround((e_initial - e_final) / delta_e));
}

void ProtocolConfig::validate() const {
  if (!(e_initial > e_final) || e_final < 0.0) {
    throw std::invalid_argument("ProtocolConfig: need e_initial > e_final >= 0");
  }
  if (!(delta_e > 0.0)) throw std::invalid_argument("ProtocolConfig: delta_e must be > 0");
  if (!(g > 0.0) || g > M_PI / 2.0) {
    throw std::invalid_argument("ProtocolConfig: g must lie in (0, pi/2]");
  }
  if (std::abs(steps() * delta_e - (e_initial - e_final)) > 1e-9) {
    throw std::invalid_argument(
        "ProtocolConfig: (e_initial - e_final) is not an integer multiple of delta_e");
  }
  if (!(beta > 0.0)) throw std::invalid_argument("ProtocolConfig: beta must be > 0");
}

std::pair<DensityMatrix, StepResult> step(const DensityMatrix& state_sm,
                                          double e_s_current,
                                          const ProtocolConfig& config) {
  StepResult res;
  res.e_s_next = e_s_current - config.delta_e;

  // Quench bookkeeping: populations are untouched, the |1>_S level moves.
  Mat rho_s = state_sm.reduce({"S"}).rho;
  const double p_excited = rho_s(1, 1).real();
  res.work = -config.delta_e * p_excited;

  res.e_r = reservoir_energy(e_s_current, config.delta_e, config.beta, config.g);
  QubitHamiltonian h_r{res.e_r};
  Mat rho_r = thermal_state(h_r, config.beta, "R").rho;

  Mat full = tensor(state_sm.rho, rho_r);              // (S,M,R)
  Mat u8 = embed_two_qubit(xy_unitary(config.g), 3, 0, 2);
  Mat evolved = u8 * full * u8.adjoint();

  Mat rho_r_final = partial_trace(evolved, {2, 2, 2}, {2});
  res.heat = ((rho_r_final - rho_r) * h_r.matrix()).trace().real();
  if (config.retain_msr) {
    res.msr_final = DensityMatrix(evolved, {2, 2, 2}, {"S", "M", "R"});
  }
  Mat rho_sm_next = partial_trace(evolved, {2, 2, 2}, {0, 1});
  return {DensityMatrix(std::move(rho_sm_next), {2, 2}, {"S", "M"}), std::move(res)};
}

TimeSeries run_protocol(const ProtocolConfig& config) {
  config.validate();
  const int n_steps = config.steps();

  DensityMatrix state = correlated_state(config.correlation);
  const DensityMatrix initial = state;
  const double t = 1.0 / config.beta;
  const double s_s_0 = vn_entropy(initial.reduce({"S"}));
  const double s_cond_0 = conditional_entropy(initial, "M");
  const double f_s_0 =
      free_energy(initial.reduce({"S"}).rho, QubitHamiltonian{config.e_initial}, t);
  const double f_cond_0 =
      conditional_free_energy(initial, QubitHamiltonian{config.e_initial}, t);

  TimeSeries ts;
  double e_s = config.e_initial;
  double w_cum = 0.0, q_cum = 0.0;
  for (int n = 1; n <= n_steps; ++n) {
    auto [next, res] = step(state, e_s, config);
    state = std::move(next);
    e_s = res.e_s_next;
    w_cum += res.work;
    q_cum += res.heat;

    const double s_s = vn_entropy(state.reduce({"S"}));
    const double s_cond = conditional_entropy(state, "M");
    QubitHamiltonian h_now{e_s};
    ts.step_index.push_back(n);
    ts.e_s.push_back(e_s);
    ts.e_r.push_back(res.e_r);
    ts.work_cum.push_back(w_cum);
    ts.heat_cum.push_back(q_cum);
    ts.delta_s_s.push_back(s_s - s_s_0);
    ts.delta_s_s_given_m.push_back(s_cond - s_cond_0);
    ts.sigma_s.push_back(s_s - s_s_0 + config.beta * q_cum);
    ts.sigma_s_given_m.push_back(s_cond - s_cond_0 + config.beta * q_cum);
    ts.sigma_i.push_back((s_cond - s_cond_0) - (s_s - s_s_0));
    ts.delta_f_s.push_back(free_energy(state.reduce({"S"}).rho, h_now, t) - f_s_0);
    ts.delta_f_s_given_m.push_back(conditional_free_energy(state, h_now, t) - f_cond_0);
    ts.mutual_information_sm.push_back(mutual_information(state));
    ts.thermal_defect.push_back(trace_distance(
        state.reduce({"S"}).rho, thermal_state(h_now, config.beta).rho));
  }
  ts.final_state = state;
  return ts;
}

}  // namespace qthermo
