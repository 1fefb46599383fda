#include "qthermo/emulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace qthermo {

Gate ry(double theta, int q) { return {GateKind::ry, theta, q, 0}; }
Gate phase_s(int q) { return {GateKind::phase_s, 0.0, q, 0}; }
Gate phase_sdg(int q) { return {GateKind::phase_sdg, 0.0, q, 0}; }
Gate hadamard(int q) { return {GateKind::hadamard, 0.0, q, 0}; }
Gate cnot(int control, int target) { return {GateKind::cnot, 0.0, control, target}; }

namespace {

Mat single_qubit_matrix(const Gate& g) {
  Mat u(2, 2);
  switch (g.kind) {
    case GateKind::ry: {
      const double c = std::cos(g.theta / 2.0), s = std::sin(g.theta / 2.0);
      u << c, -s, s, c;
      break;
    }
    case GateKind::phase_s:
      u << 1.0, 0.0, 0.0, cplx(0.0, 1.0);
      break;
    case GateKind::phase_sdg:
      u << 1.0, 0.0, 0.0, cplx(0.0, -1.0);
      break;
    case GateKind::hadamard:
      u << 1.0, 1.0, 1.0, -1.0;
      u *= M_SQRT1_2;
      break;
    default:
      throw std::logic_error("single_qubit_matrix: not a single-qubit gate");
  }
  return u;
}

void apply_gate(Vec& state, const Gate& g, int width) {
  const int dim = 1 << width;
  if (g.kind == GateKind::cnot) {
    if (g.q0 < 0 || g.q0 >= width || g.q1 < 0 || g.q1 >= width || g.q0 == g.q1) {
      throw std::invalid_argument("Circuit: bad CNOT qubit indices");
    }
    const int cbit = 1 << (width - 1 - g.q0);
    const int tbit = 1 << (width - 1 - g.q1);
    for (int i = 0; i < dim; ++i) {
      if ((i & cbit) && !(i & tbit)) std::swap(state(i), state(i | tbit));
    }
    return;
  }
  if (g.q0 < 0 || g.q0 >= width) {
    throw std::invalid_argument("Circuit: qubit index out of range");
  }
  Mat u = single_qubit_matrix(g);
  const int bit = 1 << (width - 1 - g.q0);
  for (int i = 0; i < dim; ++i) {
    if (i & bit) continue;
    cplx a = state(i), b = state(i | bit);
    state(i) = u(0, 0) * a + u(0, 1) * b;
    state(i | bit) = u(1, 0) * a + u(1, 1) * b;
  }
}

}  // namespace

Mat Circuit::matrix() const {
  const int dim = 1 << width;
  Mat m(dim, dim);
  for (int col = 0; col < dim; ++col) {
    Vec v = Vec::Zero(dim);
    v(col) = 1.0;
    for (const Gate& g : gates) apply_gate(v, g, width);
    m.col(col) = v;
  }
  return m;
}

Vec Circuit::run() const {
  Vec v = Vec::Zero(1 << width);
  v(0) = 1.0;
  for (const Gate& g : gates) apply_gate(v, g, width);
  return v;
}

std::vector<double> Circuit::probabilities(const std::vector<int>& qubits) const {
  Vec v = run();
  std::vector<double> out(size_t(1) << qubits.size(), 0.0);
  for (int i = 0; i < v.size(); ++i) {
    int outcome = 0;
    for (int q : qubits) {
      outcome = (outcome << 1) | ((i >> (width - 1 - q)) & 1);
    }
    out[outcome] += std::norm(v(i));
  }
  return out;
}

Circuit prep_sm_circuit(double theta1, double theta2) {
  Circuit c{2, {ry(theta1, 0), cnot(0, 1), ry(theta2, 0), ry(theta2, 1)}};
  return c;
}

Circuit prep_thermal_circuit(double theta3) {
  Circuit c{2, {ry(theta3, 0), cnot(0, 1)}};
  return c;
}

std::pair<double, double> solve_prep_angles(double p, double eps_c) {
  const double e = eps_c * p * (1.0 - p);
  if (p - e < -1e-12 || e < -1e-12 || 1.0 - p - e < -1e-12) {
    throw std::invalid_argument("solve_prep_angles: target diagonal is not a distribution");
  }
  auto residual = [&](double t1, double t2) {
    auto d = prep_sm_circuit(t1, t2).probabilities({0, 1});
    return std::array<double, 2>{d[0] - (p - e), d[1] - e};
  };
  auto diag_defect = [&](double t1, double t2) {
    auto d = prep_sm_circuit(t1, t2).probabilities({0, 1});
    return std::max({std::abs(d[0] - (p - e)), std::abs(d[1] - e),
                     std::abs(d[2] - e), std::abs(d[3] - (1.0 - p - e))});
  };

  double best_norm = 1e300;
  const double h = 1e-7;
  for (double s1 = 0.1; s1 < 3.1; s1 += 0.4) {
    for (double s2 = 0.0; s2 < 3.1; s2 += 0.4) {
      double t1 = s1, t2 = s2;
      for (int it = 0; it < 60; ++it) {
        auto f = residual(t1, t2);
        double fn = std::hypot(f[0], f[1]);
        if (fn < 1e-13) break;
        auto fa = residual(t1 + h, t2);
        auto fb = residual(t1, t2 + h);
        double j00 = (fa[0] - f[0]) / h, j01 = (fb[0] - f[0]) / h;
        double j10 = (fa[1] - f[1]) / h, j11 = (fb[1] - f[1]) / h;
        double det = j00 * j11 - j01 * j10;
        if (std::abs(det) < 1e-14) break;
        t1 -= (j11 * f[0] - j01 * f[1]) / det;
        t2 -= (-j10 * f[0] + j00 * f[1]) / det;
      }
      double defect = diag_defect(t1, t2);
      best_norm = std::min(best_norm, defect);
      if (defect < 1e-10) return {t1, t2};
    }
  }
  throw std::runtime_error("solve_prep_angles: no convergence, best residual " +
                           std::to_string(best_norm));
}

double thermal_prep_angle(double beta, double e_r, bool compat_formula) {
  if (compat_formula) return 2.0 * std::atan(std::exp(beta * e_r));
  return 2.0 * std::atan(std::exp(-beta * e_r / 2.0));
}

Circuit decompose_xy(double g, int q_s, int q_r, int width) {
  Circuit c{width,
            {phase_s(q_s), phase_s(q_r), hadamard(q_s), cnot(q_s, q_r),
             ry(2.0 * g, q_s), ry(2.0 * g, q_r), cnot(q_s, q_r), hadamard(q_s),
             phase_sdg(q_s), phase_sdg(q_r)}};
  return c;
}

Eigen::Matrix4d transition_matrix(const Mat& u) {
  if (u.rows() != 4 || u.cols() != 4 ||
      (u.adjoint() * u - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("transition_matrix: input is not a 4x4 unitary");
  }
  Eigen::Matrix4d t;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) t(j, k) = std::norm(u(k, j));
  return t;
}

std::vector<double> CountsHistogram::frequencies(int rep) const {
  std::vector<double> f(n_outcomes);
  for (int i = 0; i < n_outcomes; ++i) {
    f[i] = static_cast<double>(counts[rep][i]) / static_cast<double>(shots_per_rep);
  }
  return f;
}

std::vector<double> CountsHistogram::mean_frequencies() const {
  std::vector<double> m(n_outcomes, 0.0);
  for (size_t r = 0; r < counts.size(); ++r) {
    auto f = frequencies(static_cast<int>(r));
    for (int i = 0; i < n_outcomes; ++i) m[i] += f[i];
  }
  for (double& x : m) x /= static_cast<double>(counts.size());
  return m;
}

std::vector<double> CountsHistogram::std_errors() const {
  const int reps = static_cast<int>(counts.size());
  std::vector<double> se(n_outcomes, 0.0);
  if (reps < 2) return se;
  auto m = mean_frequencies();
  for (int r = 0; r < reps; ++r) {
    auto f = frequencies(r);
    for (int i = 0; i < n_outcomes; ++i) se[i] += (f[i] - m[i]) * (f[i] - m[i]);
  }
  for (double& x : se) x = std::sqrt(x / (reps * (reps - 1.0)));
  return se;
}

CountsHistogram sample_counts(const std::vector<double>& probs, int n_bits,
                              const ShotConfig& config, Rng& rng) {
  if (config.shots_per_rep < 1 || config.reps < 1) {
    throw std::invalid_argument("sample_counts: need at least one shot and one rep");
  }
  if (probs.size() != (size_t(1) << n_bits)) {
    throw std::invalid_argument("sample_counts: distribution size mismatch");
  }
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9 ||
      std::any_of(probs.begin(), probs.end(), [](double p) { return p < -1e-12; })) {
    throw std::invalid_argument("sample_counts: invalid distribution");
  }
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  cdf.back() = 1.0;

  CountsHistogram h;
  h.n_outcomes = static_cast<int>(probs.size());
  h.n_bits = n_bits;
  h.shots_per_rep = config.shots_per_rep;
  h.counts.assign(config.reps, std::vector<long>(probs.size(), 0));
  for (int r = 0; r < config.reps; ++r) {
    for (long s = 0; s < config.shots_per_rep; ++s) {
      double u = uniform01(rng);
      int outcome = static_cast<int>(
          std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (config.readout_flip_prob) {
        for (int b = 0; b < n_bits; ++b) {
          if (uniform01(rng) < *config.readout_flip_prob) outcome ^= (1 << b);
        }
      }
      ++h.counts[r][outcome];
    }
  }
  return h;
}

namespace {

ProbabilitySet exact_tables(const ExperimentConfig& cfg) {
  const double p = 1.0 / (1.0 + std::exp(-cfg.beta_e_s));
  auto [t1, t2] = solve_prep_angles(p, cfg.eps_c);
  const double t3 = thermal_prep_angle(1.0, cfg.beta_e_r);

  ProbabilitySet ps;
  auto ab = prep_sm_circuit(t1, t2).probabilities({0, 1});
  std::copy(ab.begin(), ab.end(), ps.p_ab.begin());
  auto rr = prep_thermal_circuit(t3).probabilities({0});
  std::copy(rr.begin(), rr.end(), ps.p_r.begin());

  // full preparation + collision, register (S, M, R, V)
  Circuit full{4, {}};
  for (Gate g : prep_sm_circuit(t1, t2).gates) full.gates.push_back(g);
  full.gates.push_back(ry(t3, 2));
  full.gates.push_back(cnot(2, 3));
  for (Gate g : decompose_xy(cfg.g, 0, 2, 4).gates) full.gates.push_back(g);
  auto fab = full.probabilities({0, 1});
  std::copy(fab.begin(), fab.end(), ps.p_fab.begin());

  for (int in = 0; in < 4; ++in) {
    Circuit fwd{2, {}};
    Circuit bwd{2, {}};
    if (in & 2) { fwd.gates.push_back(ry(M_PI, 0)); bwd.gates.push_back(ry(M_PI, 0)); }
    if (in & 1) { fwd.gates.push_back(ry(M_PI, 1)); bwd.gates.push_back(ry(M_PI, 1)); }
    for (Gate g : decompose_xy(cfg.g).gates) fwd.gates.push_back(g);
    for (Gate g : decompose_xy(-cfg.g).gates) bwd.gates.push_back(g);
    auto pf = fwd.probabilities({0, 1});
    auto pb = bwd.probabilities({0, 1});
    std::copy(pf.begin(), pf.end(), ps.t_fwd[in].begin());
    std::copy(pb.begin(), pb.end(), ps.t_bwd[in].begin());
  }
  return ps;
}

}  // namespace

ExperimentData run_experiment(const ExperimentConfig& config) {
  ExperimentData data;
  data.config = config;
  ProbabilitySet exact = exact_tables(config);
  if (config.exact) {
    data.reps.push_back(exact);
    return data;
  }
  Rng rng(config.shots.seed);
  auto sample4 = [&](const std::array<double, 4>& p) {
    return sample_counts({p[0], p[1], p[2], p[3]}, 2, config.shots, rng);
  };
  CountsHistogram h_ab = sample4(exact.p_ab);
  CountsHistogram h_r =
      sample_counts({exact.p_r[0], exact.p_r[1]}, 1, config.shots, rng);
  CountsHistogram h_fab = sample4(exact.p_fab);
  std::array<CountsHistogram, 4> h_fwd, h_bwd;
  for (int in = 0; in < 4; ++in) h_fwd[in] = sample4(exact.t_fwd[in]);
  for (int in = 0; in < 4; ++in) h_bwd[in] = sample4(exact.t_bwd[in]);

  data.raw_counts.push_back({"initial_sm", h_ab});
  data.raw_counts.push_back({"reservoir", h_r});
  data.raw_counts.push_back({"final_sm", h_fab});
  for (int in = 0; in < 4; ++in)
    data.raw_counts.push_back({"forward_in" + std::to_string(in), h_fwd[in]});
  for (int in = 0; in < 4; ++in)
    data.raw_counts.push_back({"backward_in" + std::to_string(in), h_bwd[in]});

  for (int r = 0; r < config.shots.reps; ++r) {
    ProbabilitySet ps;
    auto fab2 = h_ab.frequencies(r);
    std::copy(fab2.begin(), fab2.end(), ps.p_ab.begin());
    auto fr = h_r.frequencies(r);
    std::copy(fr.begin(), fr.end(), ps.p_r.begin());
    auto ffab = h_fab.frequencies(r);
    std::copy(ffab.begin(), ffab.end(), ps.p_fab.begin());
    for (int in = 0; in < 4; ++in) {
      auto tf = h_fwd[in].frequencies(r);
      auto tb = h_bwd[in].frequencies(r);
      std::copy(tf.begin(), tf.end(), ps.t_fwd[in].begin());
      std::copy(tb.begin(), tb.end(), ps.t_bwd[in].begin());
    }
    data.reps.push_back(ps);
  }
  return data;
}

namespace {

constexpr double kFreqTol = 1e-15;

struct RepTables {
  std::array<double, 32> p_f{};
  std::array<double, 32> p_b{};
  std::array<double, 32> sigma_s{};
  std::array<double, 32> sigma_sm{};
  std::array<double, 32> sigma_i{};
  std::array<bool, 32> defined{};
  std::array<double, 2> p_b_fwd{};   // memory marginal, forward stats
  std::array<double, 2> p_b_bwd{};   // memory marginal, final stats
};

int pack(int a, int b, int r, int ap, int rp) {
  return (((a * 2 + b) * 2 + r) * 2 + ap) * 2 + rp;
}

RepTables build_tables(const ProbabilitySet& ps) {
  RepTables t;
  std::array<double, 2> p_a{ps.p_ab[0] + ps.p_ab[1], ps.p_ab[2] + ps.p_ab[3]};
  std::array<double, 2> p_fa{ps.p_fab[0] + ps.p_fab[1], ps.p_fab[2] + ps.p_fab[3]};
  t.p_b_fwd = {ps.p_ab[0] + ps.p_ab[2], ps.p_ab[1] + ps.p_ab[3]};
  t.p_b_bwd = {ps.p_fab[0] + ps.p_fab[2], ps.p_fab[1] + ps.p_fab[3]};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int r = 0; r < 2; ++r)
        for (int ap = 0; ap < 2; ++ap)
          for (int rp = 0; rp < 2; ++rp) {
            int idx = pack(a, b, r, ap, rp);
            t.p_f[idx] = ps.p_ab[a * 2 + b] * ps.p_r[r] * ps.t_fwd[a * 2 + r][ap * 2 + rp];
            t.p_b[idx] =
                ps.p_fab[ap * 2 + b] * ps.p_r[rp] * ps.t_bwd[ap * 2 + rp][a * 2 + r];
            bool ok = p_a[a] > kFreqTol && p_fa[ap] > kFreqTol &&
                      ps.p_ab[a * 2 + b] > kFreqTol && ps.p_fab[ap * 2 + b] > kFreqTol &&
                      ps.p_r[r] > kFreqTol && ps.p_r[rp] > kFreqTol;
            t.defined[idx] = ok;
            if (!ok) continue;
            double dq = std::log(ps.p_r[r]) - std::log(ps.p_r[rp]);
            t.sigma_s[idx] = std::log(p_a[a]) - std::log(p_fa[ap]) + dq;
            t.sigma_sm[idx] =
                std::log(ps.p_ab[a * 2 + b]) - std::log(ps.p_fab[ap * 2 + b]) + dq;
            t.sigma_i[idx] = t.sigma_sm[idx] - t.sigma_s[idx];
          }
  return t;
}

FtEstimate aggregate(const std::string& label, const std::vector<double>& xs) {
  FtEstimate e;
  e.label = label;
  const size_t n = xs.size();
  double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  e.estimate = mean;
  if (n > 1) {
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    e.std_error = std::sqrt(var / (static_cast<double>(n) * (n - 1.0)));
  }
  return e;
}

}  // namespace

FtReport reconstruct_ft(const ExperimentData& data) {
  if (data.reps.empty()) {
    throw std::invalid_argument("reconstruct_ft: no replicates");
  }
  FtReport report;
  std::vector<RepTables> reps;
  reps.reserve(data.reps.size());
  for (const auto& ps : data.reps) reps.push_back(build_tables(ps));

  // pooled tables decide bin membership and support
  RepTables pooled{};
  for (const RepTables& t : reps) {
    for (int i = 0; i < 32; ++i) {
      pooled.p_f[i] += t.p_f[i] / reps.size();
      pooled.p_b[i] += t.p_b[i] / reps.size();
    }
    for (int b = 0; b < 2; ++b) {
      pooled.p_b_fwd[b] += t.p_b_fwd[b] / reps.size();
      pooled.p_b_bwd[b] += t.p_b_bwd[b] / reps.size();
    }
  }
  {
    ProbabilitySet mean_ps{};
    for (const auto& ps : data.reps) {
      for (int i = 0; i < 4; ++i) {
        mean_ps.p_ab[i] += ps.p_ab[i] / data.reps.size();
        mean_ps.p_fab[i] += ps.p_fab[i] / data.reps.size();
        for (int j = 0; j < 4; ++j) {
          mean_ps.t_fwd[i][j] += ps.t_fwd[i][j] / data.reps.size();
          mean_ps.t_bwd[i][j] += ps.t_bwd[i][j] / data.reps.size();
        }
      }
      for (int i = 0; i < 2; ++i) mean_ps.p_r[i] += ps.p_r[i] / data.reps.size();
    }
    RepTables mt = build_tables(mean_ps);
    pooled.sigma_s = mt.sigma_s;
    pooled.sigma_sm = mt.sigma_sm;
    pooled.sigma_i = mt.sigma_i;
    pooled.defined = mt.defined;
  }

  bool skipped_undefined = false;
  auto ift_entry = [&](const std::string& label, int which,
                       const std::function<bool(int)>& include,
                       const std::function<double(const RepTables&)>& norm) {
    std::vector<double> vals;
    for (const RepTables& t : reps) {
      const auto& sig = which == 0 ? t.sigma_s : which == 1 ? t.sigma_sm : t.sigma_i;
      double acc = 0.0;
      for (int i = 0; i < 32; ++i) {
        if (!include(i)) continue;
        if (!t.defined[i] || t.p_f[i] < kFreqTol) {
          if (pooled.p_f[i] > kFreqTol && !t.defined[i]) skipped_undefined = true;
          continue;
        }
        acc += t.p_f[i] / norm(t) * std::exp(-sig[i]);
      }
      vals.push_back(acc);
    }
    report.ifts.push_back(aggregate(label, vals));
  };
  auto all = [](int) { return true; };
  auto unit = [](const RepTables&) { return 1.0; };
  ift_entry("sigma_s", 0, all, unit);
  ift_entry("sigma_sm", 1, all, unit);
  ift_entry("sigma_i", 2, all, unit);
  for (int b = 0; b < 2; ++b) {
    ift_entry("sigma_sm|b=" + std::to_string(b), 1,
              [b](int i) { return ((i >> 3) & 1) == b; },
              [b](const RepTables& t) { return t.p_b_fwd[b]; });
  }
  for (int a = 0; a < 2; ++a)
    for (int r = 0; r < 2; ++r)
      for (int ap = 0; ap < 2; ++ap)
        for (int rp = 0; rp < 2; ++rp) {
          double psr = pooled.p_f[pack(a, 0, r, ap, rp)] + pooled.p_f[pack(a, 1, r, ap, rp)];
          if (psr < 1e-9) continue;
          std::string label = "sigma_i|sr=" + std::to_string(a) + std::to_string(r) +
                              std::to_string(ap) + std::to_string(rp);
          ift_entry(label, 2,
                    [=](int i) {
                      return i == pack(a, 0, r, ap, rp) || i == pack(a, 1, r, ap, rp);
                    },
                    [=](const RepTables& t) {
                      return t.p_f[pack(a, 0, r, ap, rp)] + t.p_f[pack(a, 1, r, ap, rp)];
                    });
        }

  // trajectory averages of the three functionals
  for (int which = 0; which < 3; ++which) {
    std::vector<double> vals;
    for (const RepTables& t : reps) {
      const auto& sig = which == 0 ? t.sigma_s : which == 1 ? t.sigma_sm : t.sigma_i;
      double acc = 0.0;
      for (int i = 0; i < 32; ++i) {
        if (t.defined[i] && t.p_f[i] > kFreqTol) acc += t.p_f[i] * sig[i];
      }
      vals.push_back(acc);
    }
    static const char* names[3] = {"avg_sigma_s", "avg_sigma_sm", "avg_sigma_i"};
    report.averages.push_back(aggregate(names[which], vals));
  }

  // detailed-FT log-ratio points, binned on the pooled sigma values
  auto emit_bins = [&](const std::string& label, int which,
                       const std::function<bool(int)>& include,
                       const std::function<double(const RepTables&)>& norm_f,
                       const std::function<double(const RepTables&)>& norm_b) {
    const auto& psig = which == 0   ? pooled.sigma_s
                       : which == 1 ? pooled.sigma_sm
                                    : pooled.sigma_i;
    std::vector<int> idx;
    for (int i = 0; i < 32; ++i) {
      if (!include(i)) continue;
      if (pooled.p_f[i] < kFreqTol && pooled.p_b[i] < kFreqTol) continue;
      if (!pooled.defined[i]) {
        skipped_undefined = true;
        continue;
      }
      idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(),
              [&](int x, int y) { return psig[x] < psig[y]; });
    size_t start = 0;
    while (start < idx.size()) {
      size_t end = start + 1;
      while (end < idx.size() && psig[idx[end]] - psig[idx[start]] < 1e-9) ++end;
      double sigma = psig[idx[start]];
      std::vector<double> ratios;
      bool ok = true;
      for (const RepTables& t : reps) {
        double pf = 0.0, pb = 0.0;
        for (size_t k = start; k < end; ++k) {
          pf += t.p_f[idx[k]];
          pb += t.p_b[idx[k]];
        }
        if (pf < kFreqTol || pb < kFreqTol) {
          ok = false;
          break;
        }
        ratios.push_back(std::log(pf / norm_f(t)) - std::log(pb / norm_b(t)));
      }
      if (ok) {
        FtEstimate agg = aggregate(label, ratios);
        report.bins.push_back({label, sigma, agg.estimate, agg.std_error});
      } else {
        report.warnings.push_back("zero-count bin excluded: " + label +
                                  " sigma=" + std::to_string(sigma));
      }
      start = end;
    }
  };
  auto unit_b = [](const RepTables&) { return 1.0; };
  emit_bins("sigma_s", 0, all, unit_b, unit_b);
  for (int b = 0; b < 2; ++b) {
    emit_bins("sigma_sm|b=" + std::to_string(b), 1,
              [b](int i) { return ((i >> 3) & 1) == b; },
              [b](const RepTables& t) { return t.p_b_fwd[b]; },
              [b](const RepTables& t) { return t.p_b_bwd[b]; });
  }
  for (int a = 0; a < 2; ++a)
    for (int r = 0; r < 2; ++r)
      for (int ap = 0; ap < 2; ++ap)
        for (int rp = 0; rp < 2; ++rp) {
          double psr_f = pooled.p_f[pack(a, 0, r, ap, rp)] + pooled.p_f[pack(a, 1, r, ap, rp)];
          double psr_b = pooled.p_b[pack(a, 0, r, ap, rp)] + pooled.p_b[pack(a, 1, r, ap, rp)];
          if (psr_f < 1e-9 || psr_b < 1e-9) continue;
          std::string label = "sigma_i|sr=" + std::to_string(a) + std::to_string(r) +
                              std::to_string(ap) + std::to_string(rp);
          emit_bins(label, 2,
                    [=](int i) {
                      return i == pack(a, 0, r, ap, rp) || i == pack(a, 1, r, ap, rp);
                    },
                    [=](const RepTables& t) {
                      return t.p_f[pack(a, 0, r, ap, rp)] + t.p_f[pack(a, 1, r, ap, rp)];
                    },
                    [=](const RepTables& t) {
                      return t.p_b[pack(a, 0, r, ap, rp)] + t.p_b[pack(a, 1, r, ap, rp)];
                    });
        }

  if (skipped_undefined) {
    report.warnings.push_back("outcomes with empty statistics were excluded");
  }
  return report;
}

}  // namespace qthermo
