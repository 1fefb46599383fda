#include "qthermo/thermo.hpp"

#include <cmath>
#include <stdexcept>

#include "qthermo/infomeasures.hpp"

namespace qthermo {

void ProcessRecord::validate() const {
  rho_sm_initial.validate();
  rho_sm_final.validate();
  DensityMatrix thermal = thermal_state(h_r, beta, "R");
  if ((rho_r_initial - thermal.rho).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("ProcessRecord: reservoir initial state is not thermal");
  }
  if (rho_msr_final) rho_msr_final->validate();
}

double heat_to_reservoir(const ProcessRecord& record) {
  if (record.rho_r_final.rows() != record.rho_r_initial.rows()) {
    throw std::invalid_argument("heat_to_reservoir: reservoir dimension mismatch");
  }
  Mat h = record.h_r.matrix();
  return ((record.rho_r_final - record.rho_r_initial) * h).trace().real();
}

double entropy_production_unconditional(const ProcessRecord& record) {
  double ds = vn_entropy(record.rho_sm_final.reduce({"S"})) -
              vn_entropy(record.rho_sm_initial.reduce({"S"}));
  return ds + record.beta * heat_to_reservoir(record);
}

double entropy_production_conditional(const ProcessRecord& record) {
  double ds = conditional_entropy(record.rho_sm_final, "M") -
              conditional_entropy(record.rho_sm_initial, "M");
  return ds + record.beta * heat_to_reservoir(record);
}

double dissipative_information(const ProcessRecord& record) {
  return entropy_production_conditional(record) -
         entropy_production_unconditional(record);
}

double free_energy(const Mat& rho_s, const QubitHamiltonian& h_s, double temperature) {
  double energy = (rho_s * h_s.matrix()).trace().real();
  return energy - temperature * vn_entropy(rho_s);
}

double conditional_free_energy(const DensityMatrix& rho_sm,
                               const QubitHamiltonian& h_s, double temperature) {
  Mat rho_s = rho_sm.reduce({"S"}).rho;
  double energy = (rho_s * h_s.matrix()).trace().real();
  return energy - temperature * conditional_entropy(rho_sm, "M");
}

EntropyBudget compute_budget(const ProcessRecord& record) {
  EntropyBudget b;
  b.heat_q_r = heat_to_reservoir(record);
  b.delta_s_s = vn_entropy(record.rho_sm_final.reduce({"S"})) -
                vn_entropy(record.rho_sm_initial.reduce({"S"}));
  b.delta_s_s_given_m = conditional_entropy(record.rho_sm_final, "M") -
                        conditional_entropy(record.rho_sm_initial, "M");
  b.sigma_s = b.delta_s_s + record.beta * b.heat_q_r;
  b.sigma_s_given_m = b.delta_s_s_given_m + record.beta * b.heat_q_r;
  b.sigma_i = b.sigma_s_given_m - b.sigma_s;
  const double t = 1.0 / record.beta;
  b.delta_f_s = free_energy(record.rho_sm_final.reduce({"S"}).rho, record.h_s_final, t) -
                free_energy(record.rho_sm_initial.reduce({"S"}).rho, record.h_s_initial, t);
  b.delta_f_s_given_m =
      conditional_free_energy(record.rho_sm_final, record.h_s_final, t) -
      conditional_free_energy(record.rho_sm_initial, record.h_s_initial, t);
  return b;
}

BoundsReport bounds_check(const ProcessRecord& record) {
  EntropyBudget b = compute_budget(record);
  const double t = 1.0 / record.beta;
  BoundsReport r;
  r.margin_work_f = record.work_ext - b.delta_f_s;
  r.margin_work_fcond = record.work_ext - b.delta_f_s_given_m - t * b.sigma_i;
  r.margin_heat = b.delta_s_s_given_m - b.sigma_i - record.beta * (-b.heat_q_r);
  r.work_vs_f = r.margin_work_f >= -1e-9;
  r.work_vs_fcond_plus_tsigma_i = r.margin_work_fcond >= -1e-9;
  r.heat_vs_scond_minus_sigma_i = r.margin_heat >= -1e-9;
  return r;
}

ProcessRecord evolve_record(const DensityMatrix& rho_sm_i, double beta,
                            const QubitHamiltonian& h_r, const Mat& u_sr,
                            const QubitHamiltonian& h_s_initial,
                            const QubitHamiltonian& h_s_final, double work_ext) {
  if (u_sr.rows() != 4 || u_sr.cols() != 4) {
    throw std::invalid_argument("evolve_record: u_sr must be 4x4");
  }
  if ((u_sr.adjoint() * u_sr - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("evolve_record: u_sr is not unitary");
  }
  ProcessRecord rec;
  rec.rho_sm_initial = rho_sm_i;
  rec.beta = beta;
  rec.h_r = h_r;
  rec.h_s_initial = h_s_initial;
  rec.h_s_final = h_s_final;
  rec.work_ext = work_ext;
  rec.rho_r_initial = thermal_state(h_r, beta, "R").rho;

  Mat full = tensor(rho_sm_i.rho, rec.rho_r_initial);  // register (S,M,R)
  Mat u8 = embed_two_qubit(u_sr, 3, 0, 2);
  Mat evolved = u8 * full * u8.adjoint();
  rec.rho_msr_final = DensityMatrix(evolved, {2, 2, 2}, {"S", "M", "R"});
  rec.rho_sm_final = rec.rho_msr_final->reduce({"S", "M"});
  rec.rho_r_final = rec.rho_msr_final->reduce({"R"}).rho;
  return rec;
}

}  // namespace qthermo
