#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qthermo/collision.hpp"
#include "qthermo/demon.hpp"
#include "qthermo/emulator.hpp"
#include "qthermo/infomeasures.hpp"
#include "qthermo/sampling.hpp"
#include "qthermo/thermo.hpp"
#include "qthermo/trajectories.hpp"

using nlohmann::json;
using namespace qthermo;

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  uint64_t seed = 1;
  json file_cfg = json::object();

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  void load() {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw std::invalid_argument("cannot read config " + config_path);
      f >> file_cfg;
    }
    std::filesystem::create_directories(out_dir);
  }

  std::filesystem::path out(const std::string& name) const {
    return std::filesystem::path(out_dir) / name;
  }
};

// file value applies only when the flag was not given
template <typename T>
void cfg(const json& j, CLI::App* cmd, const std::string& flag,
         const std::string& key, T& var) {
  if (cmd->count(flag) > 0) return;
  if (j.contains(key)) var = j.at(key).get<T>();
}

CorrelationFamily family_from(const std::string& kind, double p, double noise) {
  CorrelationFamily f;
  f.kind = correlation_kind_from_string(kind);
  f.p = p;
  f.noise = noise;
  return f;
}

json family_json(const CorrelationFamily& f) {
  return {{"kind", to_string(f.kind)}, {"p", f.p}, {"noise", f.noise}};
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

// ---------------------------------------------------------------- collision

int cmd_collision(const Common& common, const ProtocolConfig& cfg) {
  cfg.validate();
  TimeSeries ts = run_protocol(cfg);

  json meta = {{"command", "collision"},
               {"beta", cfg.beta},
               {"e_initial", cfg.e_initial},
               {"e_final", cfg.e_final},
               {"delta_e", cfg.delta_e},
               {"g", cfg.g},
               {"steps", cfg.steps()},
               {"correlation", family_json(cfg.correlation)},
               {"format", common.format}};

  const std::vector<std::pair<std::string, const std::vector<double>*>> cols = {
      {"e_s", &ts.e_s},
      {"e_r", &ts.e_r},
      {"work_cum", &ts.work_cum},
      {"heat_cum", &ts.heat_cum},
      {"sigma_s", &ts.sigma_s},
      {"sigma_s_given_m", &ts.sigma_s_given_m},
      {"sigma_i", &ts.sigma_i},
      {"delta_s_s", &ts.delta_s_s},
      {"delta_s_s_given_m", &ts.delta_s_s_given_m},
      {"delta_f_s", &ts.delta_f_s},
      {"delta_f_s_given_m", &ts.delta_f_s_given_m},
      {"mutual_information_sm", &ts.mutual_information_sm},
      {"thermal_defect", &ts.thermal_defect}};

  if (common.format == "csv") {
    std::string body;
    std::vector<std::string> header = {"step"};
    for (auto& [name, _] : cols) header.push_back(name);
    body += csv_row(header);
    for (size_t i = 0; i < ts.size(); ++i) {
      std::vector<std::string> row = {std::to_string(ts.step_index[i])};
      for (auto& [_, v] : cols) row.push_back(fmt17((*v)[i]));
      body += csv_row(row);
    }
    write_text(common.out("collision.csv"), body);
  } else {
    json j = {{"step", ts.step_index}};
    for (auto& [name, v] : cols) j[name] = *v;
    write_json(common.out("collision.json"), j);
  }
  write_json(common.out("collision.meta.json"), meta);
  return 0;
}

// ------------------------------------------------------------- trajectories

int cmd_trajectories(const Common& common, const CorrelationFamily& family,
                     double beta, double e_r, double g) {
  TwoPointProcess proc(correlated_state(family), beta, QubitHamiltonian{e_r},
                       xy_unitary(g));

  auto dist_rows = [&](Scheme scheme) {
    TrajectoryDistribution pf = proc.forward(scheme);
    TrajectoryDistribution pb = proc.backward(scheme);
    std::string body;
    if (scheme == Scheme::global) {
      StochasticFunctional sm = proc.stochastic_values(FunctionalKind::sigma_s_given_m_global);
      body += csv_row({"n", "r", "n_prime", "r_prime", "p_forward", "p_backward",
                       "sigma_s_given_m", "defined"});
      for (int i = 0; i < 64; ++i) {
        GlobalOutcome o = global_outcome(i);
        body += csv_row({std::to_string(o.n), std::to_string(o.r),
                         std::to_string(o.n_prime), std::to_string(o.r_prime),
                         fmt17(pf.prob[i]), fmt17(pb.prob[i]), fmt17(sm.value[i]),
                         sm.defined[i] ? "1" : "0"});
      }
    } else {
      StochasticFunctional ss = proc.stochastic_values(FunctionalKind::sigma_s);
      StochasticFunctional sm = proc.stochastic_values(FunctionalKind::sigma_s_given_m_local);
      StochasticFunctional si = proc.stochastic_values(FunctionalKind::sigma_i_local);
      body += csv_row({"a", "b", "r", "a_prime", "r_prime", "p_forward",
                       "p_backward", "sigma_s", "sigma_s_given_m", "sigma_i",
                       "defined"});
      for (int i = 0; i < 32; ++i) {
        LocalOutcome o = local_outcome(i);
        bool def = ss.defined[i] && sm.defined[i] && si.defined[i];
        body += csv_row({std::to_string(o.a), std::to_string(o.b),
                         std::to_string(o.r), std::to_string(o.a_prime),
                         std::to_string(o.r_prime), fmt17(pf.prob[i]),
                         fmt17(pb.prob[i]), fmt17(ss.value[i]), fmt17(sm.value[i]),
                         fmt17(si.value[i]), def ? "1" : "0"});
      }
    }
    return body;
  };
  write_text(common.out("trajectories_global.csv"), dist_rows(Scheme::global));
  write_text(common.out("trajectories_local.csv"), dist_rows(Scheme::local));

  AveragesReport avg = proc.averages_report();
  json report = {
      {"ift", {{"sigma_s_given_m_global", proc.ift(FunctionalKind::sigma_s_given_m_global)},
               {"sigma_s", proc.ift(FunctionalKind::sigma_s)},
               {"sigma_s_given_m_local", proc.ift(FunctionalKind::sigma_s_given_m_local)},
               {"sigma_i_local", proc.ift(FunctionalKind::sigma_i_local)},
               {"sigma_s_given_m_local_b0", proc.ift_conditioned_on_b(0)},
               {"sigma_s_given_m_local_b1", proc.ift_conditioned_on_b(1)}}},
      {"averages", {{"sigma_s_given_m_global", avg.avg_sigma_s_given_m_global},
                    {"sigma_s", avg.avg_sigma_s},
                    {"sigma_s_given_m_local", avg.avg_sigma_s_given_m_local},
                    {"sigma_i_local", avg.avg_sigma_i_local},
                    {"sigma_s_given_m_ensemble", avg.sigma_s_given_m_ensemble},
                    {"sigma_s_ensemble", avg.sigma_s_ensemble},
                    {"sigma_i_ensemble", avg.sigma_i_ensemble},
                    {"delta_j", avg.delta_j},
                    {"heat_q_r", avg.heat_q_r}}}};
  write_json(common.out("trajectories_report.json"), report);

  json meta = {{"command", "trajectories"},
               {"correlation", family_json(family)},
               {"beta", beta},
               {"e_r", e_r},
               {"g", g}};
  write_json(common.out("trajectories.meta.json"), meta);
  return 0;
}

// -------------------------------------------------------------------- demon

int cmd_demon(const Common& common, double beta, double e_s, int samples,
              const std::string& kind_name) {
  FeedbackKind kind = kind_name == "measurement" ? FeedbackKind::measurement
                                                 : FeedbackKind::unitary;
  auto records = demon_scatter(beta, QubitHamiltonian{e_s}, samples, common.seed, kind);

  std::string body = csv_row({"sample_id", "c_x", "c_y", "c_z", "delta_s_s",
                              "i_final", "s_m_final", "i_tilde_final", "kind"});
  for (size_t i = 0; i < records.size(); ++i) {
    const DemonRecord& r = records[i];
    body += csv_row({std::to_string(i), fmt17(r.params.c_x), fmt17(r.params.c_y),
                     fmt17(r.params.c_z), fmt17(r.delta_s_s),
                     fmt17(r.mutual_info_final), fmt17(r.memory_entropy_final),
                     fmt17(r.dephased_mutual_info_final), kind_name});
  }
  write_text(common.out("demon.csv"), body);
  json meta = {{"command", "demon"}, {"beta", beta},      {"e_s", e_s},
               {"samples", samples}, {"kind", kind_name}, {"seed", common.seed},
               {"gate_law", "nonlocals uniform in [0,pi/4]^3 folded to the Weyl chamber; Haar local unitaries"}};
  write_json(common.out("demon.meta.json"), meta);
  return 0;
}

// ------------------------------------------------------------------ emulate

int cmd_emulate(const Common& common, ExperimentConfig cfg) {
  cfg.shots.seed = common.seed;
  ExperimentData data = run_experiment(cfg);
  FtReport report = reconstruct_ft(data);

  json j;
  j["config"] = {{"beta_e_s", cfg.beta_e_s},
                 {"eps_c", cfg.eps_c},
                 {"beta_e_r", cfg.beta_e_r},
                 {"g", cfg.g},
                 {"shots_per_rep", cfg.shots.shots_per_rep},
                 {"reps", cfg.shots.reps},
                 {"seed", cfg.shots.seed},
                 {"exact", cfg.exact},
                 {"readout_flip_prob",
                  cfg.shots.readout_flip_prob ? json(*cfg.shots.readout_flip_prob)
                                              : json(nullptr)}};
  j["ifts"] = json::array();
  for (const FtEstimate& e : report.ifts) {
    j["ifts"].push_back({{"functional", e.label},
                         {"estimate", e.estimate},
                         {"std_error", e.std_error}});
  }
  j["averages"] = json::array();
  for (const FtEstimate& e : report.averages) {
    j["averages"].push_back({{"functional", e.label},
                             {"estimate", e.estimate},
                             {"std_error", e.std_error}});
  }
  j["bins"] = json::array();
  for (const FtBinPoint& b : report.bins) {
    j["bins"].push_back({{"functional", b.label},
                         {"sigma", b.sigma},
                         {"logratio", b.log_ratio},
                         {"stderr", b.std_error}});
  }
  j["warnings"] = report.warnings;
  write_json(common.out("ft_report.json"), j);

  for (const NamedCounts& nc : data.raw_counts) {
    for (size_t rep = 0; rep < nc.counts.counts.size(); ++rep) {
      std::string body = csv_row({"bitstring", "count"});
      for (int o = 0; o < nc.counts.n_outcomes; ++o) {
        std::string bits;
        for (int b = nc.counts.n_bits - 1; b >= 0; --b)
          bits += ((o >> b) & 1) ? '1' : '0';
        body += csv_row({bits, std::to_string(nc.counts.counts[rep][o])});
      }
      write_text(common.out("counts_" + nc.name + "_rep" + std::to_string(rep) + ".csv"),
                 body);
    }
  }
  return 0;
}

// ------------------------------------------------------------------- verify

struct Check {
  std::string name;
  int instances = 0;
  double worst_defect = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

int cmd_verify(const Common& common, int instances, const std::string& scheme,
               bool inject_sign_flip) {
  Rng rng(common.seed);
  std::vector<Check> checks;

  Check t1{"theorem1_hierarchy", instances, 0.0, 1e-9, true};
  Check t2{"theorem2_cmi_identity", instances, 0.0, 1e-10, true};
  Check bounds{"work_heat_bounds_protocol", 0, 0.0, 1e-9, true};
  Check ift_g{"ift_sigma_s_given_m_global", 0, 0.0, 1e-10, true};
  Check ift_l{"ift_local_functionals", 0, 0.0, 1e-10, true};
  Check avg{"average_identities", instances, 0.0, 1e-9, true};

  for (int i = 0; i < instances; ++i) {
    ProcessInstance inst = sample_instance(rng);
    ProcessRecord rec = evolve_record(inst.rho_sm, inst.beta, inst.h_r, inst.u_sr,
                                      QubitHamiltonian{1.0}, QubitHamiltonian{1.0},
                                      0.0);
    EntropyBudget b = compute_budget(rec);
    double sigma_i = inject_sign_flip ? -b.sigma_i : b.sigma_i;
    t1.worst_defect = std::max({t1.worst_defect, -b.sigma_s,
                                b.sigma_s - b.sigma_s_given_m, -sigma_i});
    double cmi = conditional_mutual_information(*rec.rho_msr_final, "M", "R", "S");
    t2.worst_defect = std::max(t2.worst_defect, std::abs(b.sigma_i - cmi));

    TwoPointProcess proc(inst.rho_sm, inst.beta, inst.h_r, inst.u_sr);
    AveragesReport ar = proc.averages_report();
    double da = std::abs(ar.avg_sigma_s_given_m_global - ar.sigma_s_given_m_ensemble);
    da = std::max(da, std::abs(ar.avg_sigma_s - ar.sigma_s_ensemble));
    da = std::max(da, std::abs(ar.sigma_i_ensemble - (ar.avg_sigma_i_local - ar.delta_j)));
    avg.worst_defect = std::max(avg.worst_defect, da);
  }

  // fluctuation theorems need full-support initial states
  for (int i = 0; i < instances; ++i) {
    ProcessInstance inst = sample_full_support_instance(rng);
    TwoPointProcess proc(inst.rho_sm, inst.beta, inst.h_r, inst.u_sr);
    if (scheme != "local") {
      ift_g.worst_defect = std::max(
          ift_g.worst_defect,
          std::abs(proc.ift(FunctionalKind::sigma_s_given_m_global) - 1.0));
      ++ift_g.instances;
    }
    if (scheme != "global") {
      double d = std::abs(proc.ift(FunctionalKind::sigma_s) - 1.0);
      d = std::max(d, std::abs(proc.ift(FunctionalKind::sigma_s_given_m_local) - 1.0));
      d = std::max(d, std::abs(proc.ift(FunctionalKind::sigma_i_local) - 1.0));
      for (int mb = 0; mb < 2; ++mb)
        d = std::max(d, std::abs(proc.ift_conditioned_on_b(mb) - 1.0));
      ift_l.worst_defect = std::max(ift_l.worst_defect, d);
      ++ift_l.instances;
    }
  }

  // work/heat bounds hold along the quasi-static protocol sweep
  for (CorrelationKind kind : {CorrelationKind::classical, CorrelationKind::quantum}) {
    ProtocolConfig pc;
    pc.delta_e = 0.009;
    pc.correlation = {kind, 1.0 / (1.0 + std::exp(-1.0)), 0.5};
    TimeSeries ts = run_protocol(pc);
    const double temp = 1.0 / pc.beta;
    for (size_t i = 0; i < ts.size(); ++i) {
      double m1 = ts.work_cum[i] - ts.delta_f_s[i];
      double m2 = ts.work_cum[i] - ts.delta_f_s_given_m[i] - temp * ts.sigma_i[i];
      double m3 = ts.delta_s_s_given_m[i] - ts.sigma_i[i] + pc.beta * ts.heat_cum[i];
      bounds.worst_defect = std::max({bounds.worst_defect, -m1, -m2, -m3});
      ++bounds.instances;
    }
  }

  checks = {t1, t2, bounds, ift_g, ift_l, avg};
  bool all_pass = true;
  json j;
  j["instances"] = instances;
  j["seed"] = common.seed;
  j["scheme"] = scheme;
  j["checks"] = json::array();
  for (Check& c : checks) {
    c.pass = c.worst_defect <= c.tolerance;
    all_pass = all_pass && c.pass;
    j["checks"].push_back({{"name", c.name},
                           {"instances", c.instances},
                           {"worst_defect", c.worst_defect},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
              << " worst_defect=" << fmt17(c.worst_defect) << "\n";
  }
  j["pass"] = all_pass;
  write_json(common.out("verify_report.json"), j);
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy-production and fluctuation-theorem toolkit"};
  app.require_subcommand(1);

  // collision
  auto* col = app.add_subcommand("collision", "run the collisional protocol");
  Common col_common;
  col_common.add_to(col);
  ProtocolConfig pcfg;
  std::string col_kind = "classical";
  double col_p = 1.0 / (1.0 + std::exp(-1.0));
  double col_noise = 0.0;
  col->add_option("--beta", pcfg.beta, "inverse temperature");
  col->add_option("--e-initial", pcfg.e_initial, "initial system level");
  col->add_option("--e-final", pcfg.e_final, "final system level");
  col->add_option("--delta-e", pcfg.delta_e, "per-step quench");
  col->add_option("--g", pcfg.g, "coupling");
  col->add_option("--correlation", col_kind, "classical|quantum|product");
  col->add_option("--p", col_p, "marginal ground probability");
  col->add_option("--noise", col_noise, "eps_c or eps_q");

  // trajectories
  auto* trj = app.add_subcommand("trajectories", "exact trajectory tables");
  Common trj_common;
  trj_common.add_to(trj);
  std::string trj_kind = "classical";
  double trj_p = 1.0 / (1.0 + std::exp(-1.0));
  double trj_noise = 0.5, trj_beta = 1.0, trj_e_r = 0.1, trj_g = 1.0;
  trj->add_option("--correlation", trj_kind, "classical|quantum|product");
  trj->add_option("--p", trj_p, "marginal ground probability");
  trj->add_option("--noise", trj_noise, "eps_c or eps_q");
  trj->add_option("--beta", trj_beta, "inverse temperature");
  trj->add_option("--e-r", trj_e_r, "reservoir level");
  trj->add_option("--g", trj_g, "coupling");

  // demon
  auto* dem = app.add_subcommand("demon", "feedback-demon scatter data");
  Common dem_common;
  dem_common.add_to(dem);
  double dem_beta = 2.0, dem_e_s = 1.0;
  int dem_samples = 10000;
  std::string dem_kind = "unitary";
  dem->add_option("--beta", dem_beta, "inverse temperature");
  dem->add_option("--e-s", dem_e_s, "system level");
  dem->add_option("--samples", dem_samples, "number of random gates");
  dem->add_option("--kind", dem_kind, "unitary|measurement")
      ->check(CLI::IsMember({"unitary", "measurement"}));

  // emulate
  auto* emu = app.add_subcommand("emulate", "shot-noise experiment emulation");
  Common emu_common;
  emu_common.add_to(emu);
  ExperimentConfig ecfg;
  double emu_flip = -1.0;
  emu->add_option("--beta-e-s", ecfg.beta_e_s, "system beta*E");
  emu->add_option("--eps-c", ecfg.eps_c, "classical correlation knob");
  emu->add_option("--beta-e-r", ecfg.beta_e_r, "reservoir beta*E");
  emu->add_option("--g", ecfg.g, "coupling");
  emu->add_option("--shots", ecfg.shots.shots_per_rep, "shots per replicate");
  emu->add_option("--reps", ecfg.shots.reps, "replicates");
  emu->add_option("--readout-flip", emu_flip, "per-qubit readout flip probability");
  emu->add_flag("--exact", ecfg.exact, "use exact probabilities, no sampling");

  // verify
  auto* ver = app.add_subcommand("verify", "fuzz the theorem suite");
  Common ver_common;
  ver_common.add_to(ver);
  int ver_instances = 1000;
  std::string ver_scheme = "both";
  bool ver_flip = false;
  ver->add_option("--instances", ver_instances, "fuzz instances");
  ver->add_option("--scheme", ver_scheme, "global|local|both")
      ->check(CLI::IsMember({"global", "local", "both"}));
  ver->add_flag("--inject-sign-flip", ver_flip, "sanity: force a detectable failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*col) {
      col_common.load();
      const json& f = col_common.file_cfg;
      cfg(f, col, "--beta", "beta", pcfg.beta);
      cfg(f, col, "--e-initial", "e_initial", pcfg.e_initial);
      cfg(f, col, "--e-final", "e_final", pcfg.e_final);
      cfg(f, col, "--delta-e", "delta_e", pcfg.delta_e);
      cfg(f, col, "--g", "g", pcfg.g);
      cfg(f, col, "--correlation", "correlation", col_kind);
      cfg(f, col, "--p", "p", col_p);
      cfg(f, col, "--noise", "noise", col_noise);
      pcfg.correlation = family_from(col_kind, col_p, col_noise);
      return cmd_collision(col_common, pcfg);
    }
    if (*trj) {
      trj_common.load();
      const json& f = trj_common.file_cfg;
      cfg(f, trj, "--correlation", "correlation", trj_kind);
      cfg(f, trj, "--p", "p", trj_p);
      cfg(f, trj, "--noise", "noise", trj_noise);
      cfg(f, trj, "--beta", "beta", trj_beta);
      cfg(f, trj, "--e-r", "e_r", trj_e_r);
      cfg(f, trj, "--g", "g", trj_g);
      return cmd_trajectories(trj_common, family_from(trj_kind, trj_p, trj_noise),
                              trj_beta, trj_e_r, trj_g);
    }
    if (*dem) {
      dem_common.load();
      const json& f = dem_common.file_cfg;
      cfg(f, dem, "--beta", "beta", dem_beta);
      cfg(f, dem, "--e-s", "e_s", dem_e_s);
      cfg(f, dem, "--samples", "samples", dem_samples);
      cfg(f, dem, "--kind", "kind", dem_kind);
      return cmd_demon(dem_common, dem_beta, dem_e_s, dem_samples, dem_kind);
    }
    if (*emu) {
      emu_common.load();
      const json& f = emu_common.file_cfg;
      cfg(f, emu, "--beta-e-s", "beta_e_s", ecfg.beta_e_s);
      cfg(f, emu, "--eps-c", "eps_c", ecfg.eps_c);
      cfg(f, emu, "--beta-e-r", "beta_e_r", ecfg.beta_e_r);
      cfg(f, emu, "--g", "g", ecfg.g);
      cfg(f, emu, "--shots", "shots_per_rep", ecfg.shots.shots_per_rep);
      cfg(f, emu, "--reps", "reps", ecfg.shots.reps);
      cfg(f, emu, "--readout-flip", "readout_flip_prob", emu_flip);
      if (emu->count("--exact") == 0 && f.contains("exact")) {
        ecfg.exact = f.at("exact").get<bool>();
      }
      if (emu_flip >= 0.0) ecfg.shots.readout_flip_prob = emu_flip;
      return cmd_emulate(emu_common, ecfg);
    }
    if (*ver) {
      ver_common.load();
      const json& f = ver_common.file_cfg;
      cfg(f, ver, "--instances", "instances", ver_instances);
      cfg(f, ver, "--scheme", "scheme", ver_scheme);
      return cmd_verify(ver_common, ver_instances, ver_scheme, ver_flip);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
