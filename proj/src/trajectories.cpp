#include "qthermo/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qthermo/infomeasures.hpp"

namespace qthermo {

namespace {
constexpr double kSupportTol = 1e-15;

double safe_log_ratio(double num, double den, bool& ok) {
  if (num < kSupportTol || den < kSupportTol) {
    ok = false;
    return 0.0;
  }
  ok = true;
  return std::log(num) - std::log(den);
}
}  // namespace

GlobalOutcome global_outcome(int index) {
  GlobalOutcome o;
  o.r_prime = index % 2; index /= 2;
  o.n_prime = index % 4; index /= 4;
  o.r = index % 2; index /= 2;
  o.n = index;
  return o;
}

LocalOutcome local_outcome(int index) {
  LocalOutcome o;
  o.r_prime = index % 2; index /= 2;
  o.a_prime = index % 2; index /= 2;
  o.r = index % 2; index /= 2;
  o.b = index % 2; index /= 2;
  o.a = index;
  return o;
}

double TrajectoryDistribution::total() const {
  return std::accumulate(prob.begin(), prob.end(), 0.0);
}

TwoPointProcess::TwoPointProcess(const DensityMatrix& rho_sm_i, double beta,
                                 const QubitHamiltonian& h_r, const Mat& u_sr) {
  build(rho_sm_i, beta, h_r, u_sr, nullptr, nullptr);
}

TwoPointProcess::TwoPointProcess(const DensityMatrix& rho_sm_i, double beta,
                                 const QubitHamiltonian& h_r, const Mat& u_sr,
                                 const Mat& sm_basis_initial,
                                 const Mat& sm_basis_final) {
  build(rho_sm_i, beta, h_r, u_sr, &sm_basis_initial, &sm_basis_final);
}

void TwoPointProcess::build(const DensityMatrix& rho_sm_i, double beta,
                            const QubitHamiltonian& h_r, const Mat& u_sr,
                            const Mat* basis_i, const Mat* basis_f) {
  if (u_sr.rows() != 4 || u_sr.cols() != 4) {
    throw std::invalid_argument("TwoPointProcess: u_sr must be 4x4");
  }
  if ((u_sr.adjoint() * u_sr - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("TwoPointProcess: u_sr is not unitary");
  }
  rho_sm_i.validate();

  auto d = std::make_shared<SpectralData>();
  d->beta = beta;
  d->e_r_level = h_r.excited_energy;
  const double p0 = 1.0 / (1.0 + std::exp(-beta * h_r.excited_energy));
  d->p_r = {p0, 1.0 - p0};
  d->e_r = {0.0, h_r.excited_energy};
  d->u_sr = u_sr;
  d->rho_sm_i = rho_sm_i;

  Mat rho_r = Mat::Zero(2, 2);
  rho_r(0, 0) = d->p_r[0];
  rho_r(1, 1) = d->p_r[1];

  Mat full = tensor(rho_sm_i.rho, rho_r);  // register (S,M,R)
  Mat u8 = embed_two_qubit(u_sr, 3, 0, 2);
  Mat evolved = u8 * full * u8.adjoint();
  Mat rho_sm_f = partial_trace(evolved, {2, 2, 2}, {0, 1});
  d->rho_sm_f = DensityMatrix(rho_sm_f, {2, 2}, {"S", "M"});
  d->rho_r_f = partial_trace(evolved, {2, 2, 2}, {2});
  d->heat_q_r = ((d->rho_r_f - rho_r) * h_r.matrix()).trace().real();

  auto with_basis = [](const Mat& rho, const Mat* basis) {
    if (!basis) return eigh(rho);
    if ((basis->adjoint() * *basis - Mat::Identity(basis->cols(), basis->cols()))
            .cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument("TwoPointProcess: supplied basis not orthonormal");
    }
    EigenSystem es;
    es.vectors = *basis;
    es.values.resize(basis->cols());
    Mat diag = basis->adjoint() * rho * *basis;
    if ((diag - Mat(diag.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 1e-9) {
      throw std::invalid_argument("TwoPointProcess: supplied basis does not diagonalize the state");
    }
    for (Eigen::Index k = 0; k < es.values.size(); ++k) es.values(k) = diag(k, k).real();
    return es;
  };
  d->sm_initial = with_basis(rho_sm_i.rho, basis_i);
  d->sm_final = with_basis(rho_sm_f, basis_f);
  d->s_initial = eigh(rho_sm_i.reduce({"S"}).rho);
  d->s_final = eigh(d->rho_sm_f.reduce({"S"}).rho);
  d->m_initial = eigh(rho_sm_i.reduce({"M"}).rho);

  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Vec v_i = tensor(d->s_initial.vectors.col(a), d->m_initial.vectors.col(b));
      Vec v_f = tensor(d->s_final.vectors.col(a), d->m_initial.vectors.col(b));
      d->p_ab(a, b) = std::max(0.0, (v_i.dot(rho_sm_i.rho * v_i)).real());
      d->p_afb(a, b) = std::max(0.0, (v_f.dot(rho_sm_f * v_f)).real());
    }
  }

  // factorization pattern of the joint eigenvectors into local ones
  auto factorize = [](const EigenSystem& joint, const EigenSystem& s_part,
                      const EigenSystem& m_part) {
    std::array<int, 4> out{};
    for (int n = 0; n < 4; ++n) {
      out[n] = -1;
      for (int a = 0; a < 2 && out[n] < 0; ++a) {
        for (int b = 0; b < 2; ++b) {
          Vec v = tensor(s_part.vectors.col(a), m_part.vectors.col(b));
          if (std::abs(std::abs(v.dot(joint.vectors.col(n))) - 1.0) < 1e-8) {
            out[n] = a * 2 + b;
            break;
          }
        }
      }
    }
    return out;
  };
  d->product_index_i = factorize(d->sm_initial, d->s_initial, d->m_initial);
  d->product_index_f = factorize(d->sm_final, d->s_final, d->m_initial);

  data_ = std::move(d);
}

TrajectoryDistribution TwoPointProcess::forward(Scheme scheme) const {
  const SpectralData& d = *data_;
  TrajectoryDistribution dist;
  dist.direction = Direction::forward;
  dist.scheme = scheme;
  dist.data = data_;
  if (scheme == Scheme::global) {
    Mat u8 = embed_two_qubit(d.u_sr, 3, 0, 2);
    dist.prob.assign(64, 0.0);
    for (int n = 0; n < 4; ++n) {
      for (int r = 0; r < 2; ++r) {
        Vec in = tensor(d.sm_initial.vectors.col(n), Mat::Identity(2, 2).col(r));
        Vec out = u8 * in;
        for (int n2 = 0; n2 < 4; ++n2) {
          for (int r2 = 0; r2 < 2; ++r2) {
            Vec fin = tensor(d.sm_final.vectors.col(n2), Mat::Identity(2, 2).col(r2));
            double t = std::norm(fin.dot(out));
            dist.prob[global_index(n, r, n2, r2)] =
                t * std::max(0.0, d.sm_initial.values(n)) * d.p_r[r];
          }
        }
      }
    }
  } else {
    dist.prob.assign(32, 0.0);
    for (int a = 0; a < 2; ++a) {
      for (int r = 0; r < 2; ++r) {
        Vec in = tensor(d.s_initial.vectors.col(a), Mat::Identity(2, 2).col(r));
        Vec out = d.u_sr * in;
        for (int a2 = 0; a2 < 2; ++a2) {
          for (int r2 = 0; r2 < 2; ++r2) {
            Vec fin = tensor(d.s_final.vectors.col(a2), Mat::Identity(2, 2).col(r2));
            double t = std::norm(fin.dot(out));
            for (int b = 0; b < 2; ++b) {
              dist.prob[local_index(a, b, r, a2, r2)] = t * d.p_ab(a, b) * d.p_r[r];
            }
          }
        }
      }
    }
  }
  return dist;
}

TrajectoryDistribution TwoPointProcess::backward(Scheme scheme) const {
  // Reference state rho_SM^f tensor rho_R^i evolved by U^dag; transition
  // amplitudes coincide with the forward ones.
  TrajectoryDistribution dist = forward(scheme);
  dist.direction = Direction::backward;
  const SpectralData& d = *data_;
  if (scheme == Scheme::global) {
    for (int idx = 0; idx < 64; ++idx) {
      GlobalOutcome o = global_outcome(idx);
      double t = dist.prob[idx];
      double pin = std::max(0.0, d.sm_initial.values(o.n)) * d.p_r[o.r];
      if (pin < kSupportTol) {
        // rebuild the bare transition weight for excluded forward outcomes
        Mat u8 = embed_two_qubit(d.u_sr, 3, 0, 2);
        Vec in = tensor(d.sm_initial.vectors.col(o.n), Mat::Identity(2, 2).col(o.r));
        Vec fin = tensor(d.sm_final.vectors.col(o.n_prime),
                         Mat::Identity(2, 2).col(o.r_prime));
        t = std::norm(fin.dot(u8 * in));
      } else {
        t /= pin;
      }
      dist.prob[idx] =
          t * std::max(0.0, d.sm_final.values(o.n_prime)) * d.p_r[o.r_prime];
    }
  } else {
    for (int idx = 0; idx < 32; ++idx) {
      LocalOutcome o = local_outcome(idx);
      double t = dist.prob[idx];
      double pin = d.p_ab(o.a, o.b) * d.p_r[o.r];
      if (pin < kSupportTol) {
        Vec in = tensor(d.s_initial.vectors.col(o.a), Mat::Identity(2, 2).col(o.r));
        Vec fin = tensor(d.s_final.vectors.col(o.a_prime),
                         Mat::Identity(2, 2).col(o.r_prime));
        t = std::norm(fin.dot(d.u_sr * in));
      } else {
        t /= pin;
      }
      dist.prob[idx] = t * d.p_afb(o.a_prime, o.b) * d.p_r[o.r_prime];
    }
  }
  return dist;
}

StochasticFunctional TwoPointProcess::stochastic_values(FunctionalKind kind) const {
  const SpectralData& d = *data_;
  StochasticFunctional f;
  f.kind = kind;
  const bool global = (kind == FunctionalKind::sigma_s_given_m_global ||
                       kind == FunctionalKind::sigma_i_global);
  f.scheme = global ? Scheme::global : Scheme::local;
  const int count = global ? 64 : 32;
  f.value.assign(count, 0.0);
  f.defined.assign(count, false);

  auto sigma_s_local = [&](const LocalOutcome& o, bool& ok) {
    bool ok1 = false, ok2 = false;
    double v = safe_log_ratio(std::max(0.0, d.s_initial.values(o.a)),
                              std::max(0.0, d.s_final.values(o.a_prime)), ok1) +
               safe_log_ratio(d.p_r[o.r], d.p_r[o.r_prime], ok2);
    ok = ok1 && ok2;
    return v;
  };

  if (global) {
    for (int idx = 0; idx < 64; ++idx) {
      GlobalOutcome o = global_outcome(idx);
      bool ok1 = false, ok2 = false;
      double v = safe_log_ratio(std::max(0.0, d.sm_initial.values(o.n)),
                                std::max(0.0, d.sm_final.values(o.n_prime)), ok1) +
                 safe_log_ratio(d.p_r[o.r], d.p_r[o.r_prime], ok2);
      bool ok = ok1 && ok2;
      if (kind == FunctionalKind::sigma_i_global) {
        // per-outcome sigma_S needs the joint eigenvectors to factorize
        int pi = d.product_index_i[o.n];
        int pf = d.product_index_f[o.n_prime];
        if (pi < 0 || pf < 0) {
          ok = false;
        } else {
          LocalOutcome lo{pi / 2, pi % 2, o.r, pf / 2, o.r_prime};
          bool oks = false;
          double vs = sigma_s_local(lo, oks);
          v -= vs;
          ok = ok && oks;
        }
      }
      f.value[idx] = ok ? v : 0.0;
      f.defined[idx] = ok;
    }
    return f;
  }

  for (int idx = 0; idx < 32; ++idx) {
    LocalOutcome o = local_outcome(idx);
    bool ok = false;
    double v = 0.0;
    switch (kind) {
      case FunctionalKind::sigma_s:
        v = sigma_s_local(o, ok);
        break;
      case FunctionalKind::sigma_s_given_m_local: {
        bool ok1 = false, ok2 = false;
        // P_b cancels between the two conditionals
        v = safe_log_ratio(d.p_ab(o.a, o.b), d.p_afb(o.a_prime, o.b), ok1) +
            safe_log_ratio(d.p_r[o.r], d.p_r[o.r_prime], ok2);
        ok = ok1 && ok2;
        break;
      }
      case FunctionalKind::sigma_i_local: {
        bool ok1 = false, ok2 = false, ok3 = false;
        double vsm = safe_log_ratio(d.p_ab(o.a, o.b), d.p_afb(o.a_prime, o.b), ok1);
        double vs = safe_log_ratio(std::max(0.0, d.s_initial.values(o.a)),
                                   std::max(0.0, d.s_final.values(o.a_prime)), ok2);
        (void)ok3;
        v = vsm - vs;
        ok = ok1 && ok2;
        break;
      }
      default:
        throw std::invalid_argument("stochastic_values: kind/scheme mismatch");
    }
    f.value[idx] = ok ? v : 0.0;
    f.defined[idx] = ok;
  }
  return f;
}

double TwoPointProcess::ift(FunctionalKind kind) const {
  TrajectoryDistribution pf = forward(
      (kind == FunctionalKind::sigma_s_given_m_global ||
       kind == FunctionalKind::sigma_i_global)
          ? Scheme::global
          : Scheme::local);
  StochasticFunctional f = stochastic_values(kind);
  double acc = 0.0;
  for (size_t i = 0; i < pf.prob.size(); ++i) {
    if (pf.prob[i] < kSupportTol) continue;
    if (!f.defined[i]) continue;
    acc += pf.prob[i] * std::exp(-f.value[i]);
  }
  return acc;
}

double TwoPointProcess::ift_conditioned_on_b(int b) const {
  const SpectralData& d = *data_;
  TrajectoryDistribution pf = forward(Scheme::local);
  StochasticFunctional f = stochastic_values(FunctionalKind::sigma_s_given_m_local);
  double p_b = std::max(0.0, d.m_initial.values(b));
  if (p_b < kSupportTol) {
    throw std::invalid_argument("ift_conditioned_on_b: memory outcome has zero weight");
  }
  double acc = 0.0;
  for (int idx = 0; idx < 32; ++idx) {
    if (local_outcome(idx).b != b) continue;
    if (pf.prob[idx] < kSupportTol || !f.defined[idx]) continue;
    acc += pf.prob[idx] / p_b * std::exp(-f.value[idx]);
  }
  return acc;
}

double TwoPointProcess::ift_conditioned_on_sr(int a, int r, int a_prime,
                                              int r_prime) const {
  TrajectoryDistribution pf = forward(Scheme::local);
  StochasticFunctional f = stochastic_values(FunctionalKind::sigma_i_local);
  double p_sr = 0.0;
  for (int b = 0; b < 2; ++b) p_sr += pf.prob[local_index(a, b, r, a_prime, r_prime)];
  if (p_sr < kSupportTol) {
    throw std::invalid_argument("ift_conditioned_on_sr: trajectory has zero weight");
  }
  double acc = 0.0;
  for (int b = 0; b < 2; ++b) {
    int idx = local_index(a, b, r, a_prime, r_prime);
    if (pf.prob[idx] < kSupportTol || !f.defined[idx]) continue;
    acc += pf.prob[idx] / p_sr * std::exp(-f.value[idx]);
  }
  return acc;
}

AveragesReport TwoPointProcess::averages_report() const {
  const SpectralData& d = *data_;
  AveragesReport rep;
  rep.heat_q_r = d.heat_q_r;

  auto average = [&](Scheme scheme, FunctionalKind kind) {
    TrajectoryDistribution pf = forward(scheme);
    StochasticFunctional f = stochastic_values(kind);
    double acc = 0.0;
    for (size_t i = 0; i < pf.prob.size(); ++i) {
      if (pf.prob[i] < kSupportTol || !f.defined[i]) continue;
      acc += pf.prob[i] * f.value[i];
    }
    return acc;
  };
  rep.avg_sigma_s_given_m_global =
      average(Scheme::global, FunctionalKind::sigma_s_given_m_global);
  rep.avg_sigma_s = average(Scheme::local, FunctionalKind::sigma_s);
  rep.avg_sigma_s_given_m_local =
      average(Scheme::local, FunctionalKind::sigma_s_given_m_local);
  rep.avg_sigma_i_local = average(Scheme::local, FunctionalKind::sigma_i_local);

  const double s_cond_i = conditional_entropy(d.rho_sm_i, "M");
  const double s_cond_f = conditional_entropy(d.rho_sm_f, "M");
  const double s_s_i = vn_entropy(d.rho_sm_i.reduce({"S"}));
  const double s_s_f = vn_entropy(d.rho_sm_f.reduce({"S"}));
  rep.sigma_s_given_m_ensemble = (s_cond_f - s_cond_i) + d.beta * d.heat_q_r;
  rep.sigma_s_ensemble = (s_s_f - s_s_i) + d.beta * d.heat_q_r;
  rep.sigma_i_ensemble = rep.sigma_s_given_m_ensemble - rep.sigma_s_ensemble;

  auto product_basis = [](const EigenSystem& s_part, const EigenSystem& m_part) {
    Mat basis(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        basis.col(a * 2 + b) = tensor(s_part.vectors.col(a), m_part.vectors.col(b));
    return basis;
  };
  Mat basis_i = product_basis(d.s_initial, d.m_initial);
  Mat basis_f = product_basis(d.s_final, d.m_initial);
  double j_i = coherence_j(d.rho_sm_i.rho, basis_i);
  double j_f = coherence_j(d.rho_sm_f.rho, basis_f);
  rep.delta_j = j_f - j_i;
  rep.dephased_entropy_change = vn_entropy(dephase(d.rho_sm_f.rho, basis_f)) -
                                vn_entropy(dephase(d.rho_sm_i.rho, basis_i));
  return rep;
}

namespace {
DetailedFt bin_by_sigma(const std::vector<double>& pf, const std::vector<double>& pb,
                        const StochasticFunctional& f,
                        const std::vector<int>& indices) {
  struct Entry { double sigma; double pf; double pb; };
  std::vector<Entry> entries;
  DetailedFt out;
  for (int i : indices) {
    if (!f.defined[i]) {
      continue;  // excluded outcomes stay out of both histograms
    }
    entries.push_back({f.value[i], pf[i], pb[i]});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.sigma < y.sigma; });
  for (const Entry& e : entries) {
    if (!out.bins.empty() && std::abs(out.bins.back().sigma - e.sigma) < 1e-9) {
      out.bins.back().p_forward += e.pf;
      out.bins.back().p_backward_neg += e.pb;
    } else {
      out.bins.push_back({e.sigma, e.pf, e.pb, false, 0.0});
    }
  }
  std::vector<DetailedFtBin> kept;
  for (DetailedFtBin& b : out.bins) {
    if (b.p_forward > kSupportTol && b.p_backward_neg > kSupportTol) {
      b.ratio_defined = true;
      b.log_ratio = std::log(b.p_forward) - std::log(b.p_backward_neg);
      kept.push_back(b);
    } else if (b.p_forward > kSupportTol || b.p_backward_neg > kSupportTol) {
      out.excluded_sigmas.push_back(b.sigma);
    }
  }
  out.bins = std::move(kept);
  return out;
}
}  // namespace

DetailedFt TwoPointProcess::detailed_ft(FunctionalKind kind,
                                        std::optional<int> condition_b) const {
  const bool global = (kind == FunctionalKind::sigma_s_given_m_global ||
                       kind == FunctionalKind::sigma_i_global);
  Scheme scheme = global ? Scheme::global : Scheme::local;
  TrajectoryDistribution pf = forward(scheme);
  TrajectoryDistribution pb = backward(scheme);
  StochasticFunctional f = stochastic_values(kind);

  std::vector<int> indices;
  const int count = global ? 64 : 32;
  for (int i = 0; i < count; ++i) {
    if (condition_b) {
      if (global) throw std::invalid_argument("detailed_ft: cannot condition a global scheme on b");
      if (local_outcome(i).b != *condition_b) continue;
    }
    indices.push_back(i);
  }
  DetailedFt out = bin_by_sigma(pf.prob, pb.prob, f, indices);
  if (condition_b) {
    double p_b = std::max(0.0, data_->m_initial.values(*condition_b));
    for (DetailedFtBin& b : out.bins) {
      b.p_forward /= p_b;
      b.p_backward_neg /= p_b;
    }
  }
  return out;
}

}  // namespace qthermo
