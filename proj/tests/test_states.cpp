#include "doctest.h"

#include <cmath>

#include "qthermo/states.hpp"

using namespace qthermo;

TEST_SUITE("states") {

TEST_CASE("thermal qubit populations") {
  QubitHamiltonian h{1.0};
  DensityMatrix rho = thermal_state(h, 1.0, "R");
  double p = 1.0 / (1.0 + std::exp(-1.0));
  CHECK(rho.rho(0, 0).real() == doctest::Approx(p).epsilon(1e-14));
  CHECK(rho.rho(1, 1).real() == doctest::Approx(1.0 - p).epsilon(1e-14));
  CHECK(std::abs(rho.rho(0, 1)) == 0.0);
  CHECK(rho.labels[0] == "R");

  // beta -> 0 is maximally mixed, beta -> inf is the ground state
  CHECK(thermal_state(h, 0.0).rho(0, 0).real() == doctest::Approx(0.5));
  CHECK(thermal_state(h, 200.0).rho(1, 1).real() < 1e-12);
  CHECK_THROWS(thermal_state(h, -1.0));
}

TEST_CASE("classically correlated family") {
  double p = 0.7;
  for (double eps : {0.0, 0.3, 1.0}) {
    DensityMatrix rho = classical_corr_state(p, eps);
    double e = eps * p * (1.0 - p);
    CHECK(rho.rho(0, 0).real() == doctest::Approx(p - e).epsilon(1e-14));
    CHECK(rho.rho(1, 1).real() == doctest::Approx(e).epsilon(1e-14));
    CHECK(rho.rho(2, 2).real() == doctest::Approx(e).epsilon(1e-14));
    CHECK(rho.rho(3, 3).real() == doctest::Approx(1.0 - p - e).epsilon(1e-14));
    // no coherences anywhere
    CHECK((rho.rho - Mat(rho.rho.diagonal().asDiagonal())).cwiseAbs().maxCoeff() ==
          0.0);
    // both marginals are diag(p, 1-p)
    for (auto label : {"S", "M"}) {
      DensityMatrix m = rho.reduce({label});
      CHECK(m.rho(0, 0).real() == doctest::Approx(p).epsilon(1e-14));
    }
  }
  CHECK_THROWS(classical_corr_state(1.2, 0.0));
  CHECK_THROWS(classical_corr_state(0.5, -0.1));
  CHECK_THROWS(classical_corr_state(0.5, 1.5));
}

TEST_CASE("quantum correlated family") {
  double p = 0.7;
  DensityMatrix pure = quantum_corr_state(p, 0.0);
  // eps_q = 0 is the pure entangled state: rank one
  Vec psi = Vec::Zero(4);
  psi(0) = std::sqrt(p);
  psi(3) = std::sqrt(1.0 - p);
  CHECK((pure.rho - psi * psi.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

  for (double eps : {0.25, 0.8, 1.0}) {
    DensityMatrix rho = quantum_corr_state(p, eps);
    // diagonal never moves; only the |00><11| coherence is damped
    CHECK(rho.rho(0, 0).real() == doctest::Approx(p).epsilon(1e-14));
    CHECK(rho.rho(3, 3).real() == doctest::Approx(1.0 - p).epsilon(1e-14));
    CHECK(std::abs(rho.rho(0, 3)) ==
          doctest::Approx((1.0 - eps) * std::sqrt(p * (1.0 - p))).epsilon(1e-13));
    rho.validate();
    DensityMatrix m = rho.reduce({"M"});
    CHECK(m.rho(0, 0).real() == doctest::Approx(p).epsilon(1e-14));
    CHECK(std::abs(m.rho(0, 1)) < 1e-14);
  }
  // fully dephased quantum family equals the eps_c = 0 classical one
  DensityMatrix q1 = quantum_corr_state(p, 1.0);
  DensityMatrix c0 = classical_corr_state(p, 0.0);
  CHECK((q1.rho - c0.rho).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("correlated_state dispatch and product family") {
  CorrelationFamily f;
  f.kind = CorrelationKind::product;
  f.p = 0.6;
  DensityMatrix rho = correlated_state(f);
  Mat marg_s = rho.reduce({"S"}).rho;
  Mat marg_m = rho.reduce({"M"}).rho;
  CHECK((rho.rho - tensor(marg_s, marg_m)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(marg_s(0, 0).real() == doctest::Approx(0.6));

  f.kind = CorrelationKind::classical;
  f.noise = 0.4;
  CHECK((correlated_state(f).rho - classical_corr_state(0.6, 0.4).rho)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("validation and bookkeeping") {
  DensityMatrix rho = classical_corr_state(0.5, 0.5);
  CHECK(rho.subsystem("S") == 0);
  CHECK(rho.subsystem("M") == 1);
  CHECK_THROWS(rho.subsystem("R"));

  Mat bad = rho.rho;
  bad(0, 0) += 0.5;  // trace off
  CHECK_THROWS(DensityMatrix(bad, {2, 2}, {"S", "M"}).validate());
  Mat neg = Mat::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS(DensityMatrix(neg, {2}, {"S"}).validate());
}

TEST_CASE("kind names round-trip") {
  for (auto k : {CorrelationKind::classical, CorrelationKind::quantum,
                 CorrelationKind::product}) {
    CHECK(correlation_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(correlation_kind_from_string("bogus"));
}

}  // TEST_SUITE
