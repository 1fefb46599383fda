#include "doctest.h"

#include <cmath>

#include "qthermo/infomeasures.hpp"
#include "qthermo/sampling.hpp"
#include "qthermo/thermo.hpp"

using namespace qthermo;

TEST_SUITE("thermo") {

TEST_CASE("heat is the reservoir energy change") {
  Rng rng(1);
  ProcessInstance inst = sample_instance(rng);
  ProcessRecord rec = evolve_record(inst.rho_sm, inst.beta, inst.h_r, inst.u_sr,
                                    QubitHamiltonian{1.0}, QubitHamiltonian{1.0});
  double want = ((rec.rho_r_final - rec.rho_r_initial) * inst.h_r.matrix())
                    .trace()
                    .real();
  CHECK(heat_to_reservoir(rec) == doctest::Approx(want).epsilon(1e-14));
  // closed SR evolution with an untouched M: no work term, so the heat
  // balances the SM energy change (here both Hamiltonians trivial)
  CHECK(std::abs(rec.rho_sm_final.rho.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("budget internal consistency") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    ProcessInstance inst = sample_instance(rng);
    ProcessRecord rec =
        evolve_record(inst.rho_sm, inst.beta, inst.h_r, inst.u_sr,
                      QubitHamiltonian{1.0}, QubitHamiltonian{1.0});
    EntropyBudget b = compute_budget(rec);
    CHECK(b.sigma_i ==
          doctest::Approx(b.sigma_s_given_m - b.sigma_s).epsilon(1e-12));
    CHECK(b.sigma_s ==
          doctest::Approx(b.delta_s_s + rec.beta * b.heat_q_r).epsilon(1e-12));
    CHECK(b.sigma_s_given_m ==
          doctest::Approx(b.delta_s_s_given_m + rec.beta * b.heat_q_r)
              .epsilon(1e-12));
    CHECK(entropy_production_unconditional(rec) ==
          doctest::Approx(b.sigma_s).epsilon(1e-13));
    CHECK(dissipative_information(rec) ==
          doctest::Approx(b.sigma_i).epsilon(1e-13));
  }
}

TEST_CASE("entropy production hierarchy over random instances") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    ProcessInstance inst = sample_instance(rng);
    ProcessRecord rec =
        evolve_record(inst.rho_sm, inst.beta, inst.h_r, inst.u_sr,
                      QubitHamiltonian{1.0}, QubitHamiltonian{1.0});
    EntropyBudget b = compute_budget(rec);
    CHECK(b.sigma_s > -1e-10);
    CHECK(b.sigma_i > -1e-10);
    CHECK(b.sigma_s_given_m > b.sigma_s - 1e-10);
  }
}

TEST_CASE("dissipative information equals the conditional mutual information") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    ProcessInstance inst = sample_instance(rng);
    ProcessRecord rec =
        evolve_record(inst.rho_sm, inst.beta, inst.h_r, inst.u_sr,
                      QubitHamiltonian{1.0}, QubitHamiltonian{1.0});
    REQUIRE(rec.rho_msr_final.has_value());
    double cmi =
        conditional_mutual_information(*rec.rho_msr_final, "M", "R", "S");
    CHECK(dissipative_information(rec) == doctest::Approx(cmi).epsilon(1e-10));
  }
}

TEST_CASE("free energy is minimized by the thermal state") {
  QubitHamiltonian h{1.3};
  double beta = 0.8, temperature = 1.0 / beta;
  Mat gibbs = thermal_state(h, beta).rho;
  double f_min = -temperature * std::log(1.0 + std::exp(-beta * 1.3));
  CHECK(free_energy(gibbs, h, temperature) ==
        doctest::Approx(f_min).epsilon(1e-13));
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    CHECK(free_energy(random_density(2, rng), h, temperature) >=
          f_min - 1e-12);
  }
}

TEST_CASE("conditional free energy uses the conditional entropy") {
  DensityMatrix rho = quantum_corr_state(0.7, 0.0);
  QubitHamiltonian h{1.0};
  double t = 1.0;
  Mat rho_s = rho.reduce({"S"}).rho;
  double want = (h.matrix() * rho_s).trace().real() -
                t * conditional_entropy(rho, "M");
  CHECK(conditional_free_energy(rho, h, t) ==
        doctest::Approx(want).epsilon(1e-13));
  // negative conditional entropy pushes F_{S|M} above F_S
  CHECK(conditional_free_energy(rho, h, t) > free_energy(rho_s, h, t));
}

TEST_CASE("bounds report margins match the budget") {
  Rng rng(7);
  ProcessInstance inst = sample_instance(rng);
  ProcessRecord rec =
      evolve_record(inst.rho_sm, inst.beta, inst.h_r, inst.u_sr,
                    QubitHamiltonian{1.0}, QubitHamiltonian{0.9}, -0.05);
  EntropyBudget b = compute_budget(rec);
  BoundsReport br = bounds_check(rec);
  double t = 1.0 / rec.beta;
  CHECK(br.margin_work_f ==
        doctest::Approx(rec.work_ext - b.delta_f_s).epsilon(1e-12));
  CHECK(br.margin_work_fcond ==
        doctest::Approx(rec.work_ext - b.delta_f_s_given_m - t * b.sigma_i)
            .epsilon(1e-12));
  // the heat bound is written against Q_S = -Q_R
  CHECK(br.margin_heat ==
        doctest::Approx(b.delta_s_s_given_m - b.sigma_i +
                        rec.beta * b.heat_q_r)
            .epsilon(1e-12));
  CHECK(br.work_vs_f == (br.margin_work_f >= -1e-9));
}

TEST_CASE("record validation") {
  Rng rng(8);
  ProcessInstance inst = sample_instance(rng);
  ProcessRecord rec =
      evolve_record(inst.rho_sm, inst.beta, inst.h_r, inst.u_sr,
                    QubitHamiltonian{1.0}, QubitHamiltonian{1.0});
  rec.validate();
  rec.beta = -0.5;
  CHECK_THROWS(rec.validate());
}

}  // TEST_SUITE
