#include "doctest.h"

#include <cmath>

#include "qthermo/collision.hpp"
#include "qthermo/infomeasures.hpp"

using namespace qthermo;

namespace {

// independent kron for the (S,M,R) register with the gate on S and R
Mat embed_sr_oracle(const Mat& u) {
  Mat big = Mat::Zero(8, 8);
  for (int in = 0; in < 8; ++in) {
    int s = (in >> 2) & 1, m = (in >> 1) & 1, r = in & 1;
    for (int sp = 0; sp < 2; ++sp)
      for (int rp = 0; rp < 2; ++rp)
        big((sp << 2) | (m << 1) | rp, in) += u(sp * 2 + rp, s * 2 + r);
  }
  return big;
}

}  // namespace

TEST_SUITE("collision") {

TEST_CASE("xy unitary block structure") {
  CHECK((xy_unitary(0.0) - identity(4)).cwiseAbs().maxCoeff() < 1e-15);
  double g = 0.37;
  Mat u = xy_unitary(g);
  CHECK((u.adjoint() * u - identity(4)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(u(0, 0) == cplx(1, 0));
  CHECK(u(3, 3) == cplx(1, 0));
  CHECK(u(1, 1).real() == doctest::Approx(std::cos(2 * g)).epsilon(1e-14));
  CHECK(u(2, 2).real() == doctest::Approx(std::cos(2 * g)).epsilon(1e-14));
  CHECK(std::abs(std::abs(u(1, 2)) - std::abs(std::sin(2 * g))) < 1e-14);
  CHECK(std::abs(u(0, 1)) + std::abs(u(0, 2)) + std::abs(u(0, 3)) < 1e-15);
  // quarter-pi angle swaps the excitation completely
  Mat sw = xy_unitary(M_PI / 4);
  CHECK(std::abs(sw(1, 1)) < 1e-15);
  CHECK(std::abs(std::abs(sw(2, 1)) - 1.0) < 1e-14);
}

TEST_CASE("reservoir level keeps the system thermal") {
  double beta = 1.0, e_s = 1.0, de = 0.0045, g = 0.1;
  double e_r = reservoir_energy(e_s, de, beta, g);
  // full swap limit: the reservoir must sit exactly at the target level
  CHECK(reservoir_energy(e_s, de, beta, M_PI / 4) ==
        doctest::Approx(e_s - de).epsilon(1e-14));
  // fixed point check for a weak collision
  ProtocolConfig cfg;
  cfg.beta = beta;
  cfg.delta_e = de;
  cfg.g = g;
  cfg.correlation.kind = CorrelationKind::product;
  cfg.correlation.p = 1.0 / (1.0 + std::exp(-beta * e_s));
  DensityMatrix sm = correlated_state(cfg.correlation);
  auto [next, res] = step(sm, e_s, cfg);
  CHECK(res.e_r == doctest::Approx(e_r).epsilon(1e-14));
  Mat want = thermal_state(QubitHamiltonian{res.e_s_next}, beta).rho;
  CHECK(trace_distance(next.reduce({"S"}).rho, want) < 1e-12);
  // partial-swap regime where the closed form has no solution
  CHECK_THROWS(reservoir_energy(0.01, 0.5, beta, 0.1));
}

TEST_CASE("first step quench work") {
  ProtocolConfig cfg;  // defaults: beta 1, E 1 -> 0.1, dE 0.0045, g 0.1
  cfg.correlation.kind = CorrelationKind::classical;
  cfg.correlation.p = 1.0 / (1.0 + std::exp(-1.0));
  DensityMatrix sm = correlated_state(cfg.correlation);
  auto [next, res] = step(sm, cfg.e_initial, cfg);
  double p_exc = std::exp(-1.0) / (1.0 + std::exp(-1.0));
  CHECK(res.work == doctest::Approx(-cfg.delta_e * p_exc).epsilon(1e-13));
  CHECK(res.e_s_next == doctest::Approx(cfg.e_initial - cfg.delta_e));
}

TEST_CASE("one step against a whole-register oracle") {
  ProtocolConfig cfg;
  cfg.correlation.kind = CorrelationKind::quantum;
  cfg.correlation.p = 1.0 / (1.0 + std::exp(-1.0));
  cfg.retain_msr = true;
  DensityMatrix sm = correlated_state(cfg.correlation);
  auto [next, res] = step(sm, cfg.e_initial, cfg);

  Mat rho_r = thermal_state(QubitHamiltonian{res.e_r}, cfg.beta).rho;
  Mat rho0 = tensor(sm.rho, rho_r);
  Mat u = embed_sr_oracle(xy_unitary(cfg.g));
  Mat rho1 = u * rho0 * u.adjoint();
  Mat sm_f = partial_trace(rho1, {2, 2, 2}, {0, 1});
  Mat r_f = partial_trace(rho1, {2, 2, 2}, {2});
  CHECK((next.rho - sm_f).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(res.heat == doctest::Approx(res.e_r * (r_f(1, 1) - rho_r(1, 1)).real())
                        .epsilon(1e-12));
  double p_exc = sm.reduce({"S"}).rho(1, 1).real();
  CHECK(res.work ==
        doctest::Approx(p_exc * (res.e_s_next - cfg.e_initial)).epsilon(1e-12));
  REQUIRE(res.msr_final.has_value());
  CHECK((res.msr_final->rho - rho1).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("full protocol endpoints") {
  // reference numbers from an independent whole-register simulation of the
  // same schedule (kept to seven digits)
  double p = 1.0 / (1.0 + std::exp(-1.0));
  double h = binary_entropy(p);

  ProtocolConfig cfg;
  cfg.correlation.kind = CorrelationKind::classical;
  cfg.correlation.p = p;
  TimeSeries ts = run_protocol(cfg);
  REQUIRE(ts.size() == 200);
  CHECK(ts.work_cum.back() == doctest::Approx(-0.33067138).epsilon(1e-6));
  CHECK(ts.heat_cum.back() == doctest::Approx(-0.08696463).epsilon(1e-6));
  CHECK(ts.sigma_s.back() == doctest::Approx(0.02273101).epsilon(1e-6));
  CHECK(ts.sigma_i.back() == doctest::Approx(h).epsilon(1e-7));

  cfg.correlation.kind = CorrelationKind::quantum;
  TimeSeries tq = run_protocol(cfg);
  // the entangled family sheds its coherence more slowly, so the endpoint
  // carries a visibly larger finite-step remainder than the classical one
  CHECK(tq.sigma_i.back() == doctest::Approx(2 * h).epsilon(1e-3));
  // same marginal dynamics: identical work and heat records
  CHECK(tq.work_cum.back() == doctest::Approx(ts.work_cum.back()).epsilon(1e-12));
  CHECK(tq.sigma_s.back() == doctest::Approx(ts.sigma_s.back()).epsilon(1e-10));
}

TEST_CASE("work converges to the quasi-static value linearly in the step size") {
  double w_qs = std::log((1.0 + std::exp(-1.0)) / (1.0 + std::exp(-0.1)));
  double prev_gap = 0.0;
  int i = 0;
  for (double de : {0.009, 0.0045, 0.00225}) {
    ProtocolConfig cfg;
    cfg.delta_e = de;
    cfg.correlation.kind = CorrelationKind::classical;
    cfg.correlation.p = 1.0 / (1.0 + std::exp(-1.0));
    TimeSeries ts = run_protocol(cfg);
    double gap = std::abs(ts.work_cum.back() - w_qs);
    if (i > 0) CHECK(prev_gap / gap == doctest::Approx(2.0).epsilon(0.02));
    prev_gap = gap;
    ++i;
  }
}

TEST_CASE("time series invariants") {
  ProtocolConfig cfg;
  cfg.delta_e = 0.009;  // 100 steps
  cfg.correlation.kind = CorrelationKind::classical;
  cfg.correlation.p = 1.0 / (1.0 + std::exp(-1.0));
  TimeSeries ts = run_protocol(cfg);
  double mi0 = mutual_information(
      classical_corr_state(cfg.correlation.p, cfg.correlation.noise));
  for (size_t k = 0; k < ts.size(); ++k) {
    CHECK(ts.thermal_defect[k] < 1e-9);
    CHECK(ts.sigma_i[k] + ts.mutual_information_sm[k] ==
          doctest::Approx(mi0).epsilon(1e-9));
    CHECK(ts.sigma_s_given_m[k] >= ts.sigma_s[k] - 1e-10);
    if (k > 0) {
      CHECK(ts.sigma_s[k] >= ts.sigma_s[k - 1] - 1e-12);
      CHECK(ts.sigma_s_given_m[k] >= ts.sigma_s_given_m[k - 1] - 1e-12);
      CHECK(ts.e_s[k] == doctest::Approx(ts.e_s[k - 1] - cfg.delta_e));
    }
  }
  // memory marginal never moves
  DensityMatrix m_final = ts.final_state.reduce({"M"});
  CHECK(m_final.rho(0, 0).real() ==
        doctest::Approx(cfg.correlation.p).epsilon(1e-10));
  CHECK(std::abs(m_final.rho(0, 1)) < 1e-10);
}

TEST_CASE("uncorrelated memory produces no dissipative information") {
  ProtocolConfig cfg;
  cfg.delta_e = 0.009;
  cfg.correlation.kind = CorrelationKind::product;
  cfg.correlation.p = 1.0 / (1.0 + std::exp(-1.0));
  TimeSeries ts = run_protocol(cfg);
  for (double si : ts.sigma_i) CHECK(std::abs(si) < 1e-10);
}

TEST_CASE("config validation") {
  ProtocolConfig cfg;
  CHECK(cfg.steps() == 200);
  cfg.delta_e = 0.07;  // not a divisor of E_i - E_f
  CHECK_THROWS(cfg.validate());
  cfg.delta_e = -0.0045;
  CHECK_THROWS(cfg.validate());
  cfg = ProtocolConfig{};
  cfg.e_final = 2.0;  // uphill
  CHECK_THROWS(cfg.validate());
}

}  // TEST_SUITE
