#include "qthermo/demon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qthermo/infomeasures.hpp"

namespace qthermo {

namespace {
void require_unitary(const Mat& u, int dim, const char* who) {
  if (u.rows() != dim || u.cols() != dim ||
      (u.adjoint() * u - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument(std::string(who) + ": input is not unitary");
  }
}
}  // namespace

NonlocalParams fold_weyl(const NonlocalParams& params) {
  std::array<double, 3> c{std::abs(params.c_x), std::abs(params.c_y),
                          std::abs(params.c_z)};
  std::sort(c.begin(), c.end(), std::greater<double>());
  return {c[0], c[1], c[2]};
}

NonlocalParams sample_nonlocal(Rng& rng) {
  NonlocalParams p;
  p.c_x = uniform(rng, 0.0, M_PI / 4.0);
  p.c_y = uniform(rng, 0.0, M_PI / 4.0);
  p.c_z = uniform(rng, 0.0, M_PI / 4.0);
  return fold_weyl(p);
}

Mat canonical_two_qubit(const NonlocalParams& params, const Mat& u1,
                        const Mat& u2, const Mat& u3, const Mat& u4) {
  require_unitary(u1, 2, "canonical_two_qubit");
  require_unitary(u2, 2, "canonical_two_qubit");
  require_unitary(u3, 2, "canonical_two_qubit");
  require_unitary(u4, 2, "canonical_two_qubit");
  Mat h = params.c_x * tensor(pauli_x(), pauli_x()) +
          params.c_y * tensor(pauli_y(), pauli_y()) +
          params.c_z * tensor(pauli_z(), pauli_z());
  EigenSystem es = eigh(h);
  Mat core = Mat::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    core += std::exp(cplx(0.0, es.values(k))) * es.vectors.col(k) *
            es.vectors.col(k).adjoint();
  }
  return tensor(u1, u2) * core * tensor(u3, u4);
}

Mat unitary_feedback(const Mat& u0, const Mat& u1) {
  require_unitary(u0, 2, "unitary_feedback");
  require_unitary(u1, 2, "unitary_feedback");
  Mat f = Mat::Zero(4, 4);
  f.block(0, 0, 2, 2) = u0;
  f.block(2, 2, 2, 2) = u1;
  return f;
}

MeasurementFeedback measurement_feedback(const DensityMatrix& state_ms,
                                         const Mat& u0, const Mat& u1) {
  require_unitary(u0, 2, "measurement_feedback");
  require_unitary(u1, 2, "measurement_feedback");
  state_ms.validate();
  if (state_ms.dim() != 4) {
    throw std::invalid_argument("measurement_feedback: need a two-qubit state");
  }
  EigenSystem m_basis = eigh(state_ms.reduce({"M"}).rho);

  MeasurementFeedback out;
  Mat recombined = Mat::Zero(4, 4);
  const Mat* us[2] = {&u0, &u1};
  for (int k = 0; k < 2; ++k) {
    Mat proj = tensor(Mat(m_basis.vectors.col(k) * m_basis.vectors.col(k).adjoint()),
                      identity(2));
    Mat branch = proj * state_ms.rho * proj;
    double p = branch.trace().real();
    out.probability[k] = p;
    Mat act = tensor(identity(2), *us[k]);
    branch = act * branch * act.adjoint();
    recombined += branch;
    if (p > 1e-15) {
      out.branch[k] = DensityMatrix(branch / p, {2, 2}, {"M", "S"});
    } else {
      out.branch[k] = DensityMatrix(Mat::Identity(4, 4) / 4.0, {2, 2}, {"M", "S"});
    }
  }
  out.recombined = DensityMatrix(std::move(recombined), {2, 2}, {"M", "S"});
  return out;
}

std::vector<DemonRecord> demon_scatter(double beta, const QubitHamiltonian& h_s,
                                       int num_samples, uint64_t seed,
                                       FeedbackKind kind) {
  if (num_samples < 0) {
    throw std::invalid_argument("demon_scatter: num_samples must be >= 0");
  }
  Rng rng(seed);
  Mat rho_s = thermal_state(h_s, beta, "S").rho;
  Mat rho_m = Mat::Zero(2, 2);
  rho_m(0, 0) = 1.0;
  const double s_s_initial = vn_entropy(rho_s);

  std::vector<DemonRecord> records;
  records.reserve(static_cast<size_t>(num_samples));
  for (int i = 0; i < num_samples; ++i) {
    DemonRecord rec;
    rec.feedback_kind = kind;
    rec.params = sample_nonlocal(rng);
    Mat g = canonical_two_qubit(rec.params, haar_unitary(2, rng),
                                haar_unitary(2, rng), haar_unitary(2, rng),
                                haar_unitary(2, rng));
    Mat joint = tensor(rho_m, rho_s);  // (M, S)
    joint = g * joint * g.adjoint();

    Mat u0 = haar_unitary(2, rng);
    Mat u1 = haar_unitary(2, rng);
    DensityMatrix final_state;
    if (kind == FeedbackKind::unitary) {
      Mat f = unitary_feedback(u0, u1);
      final_state = DensityMatrix(f * joint * f.adjoint(), {2, 2}, {"M", "S"});
    } else {
      final_state = measurement_feedback(DensityMatrix(joint, {2, 2}, {"M", "S"}),
                                         u0, u1).recombined;
    }

    rec.delta_s_s = vn_entropy(final_state.reduce({"S"})) - s_s_initial;
    rec.memory_entropy_final = vn_entropy(final_state.reduce({"M"}));
    rec.mutual_info_final = mutual_information(final_state);
    rec.joint_entropy_final = vn_entropy(final_state);

    // dephase the memory alone: kill coherence across its eigen-sectors
    EigenSystem m_final = eigh(final_state.reduce({"M"}).rho);
    Mat deph = Mat::Zero(4, 4);
    for (int k = 0; k < 2; ++k) {
      Mat proj = tensor(
          Mat(m_final.vectors.col(k) * m_final.vectors.col(k).adjoint()),
          identity(2));
      deph += proj * final_state.rho * proj;
    }
    DensityMatrix dephased(std::move(deph), {2, 2}, {"M", "S"});
    rec.dephased_mutual_info_final = mutual_information(dephased);
    records.push_back(rec);
  }
  return records;
}

}  // namespace qthermo
