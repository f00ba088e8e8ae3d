#pragma once

// Scenario runner: parses a flat JSON config (strict keys), builds the state
// and the twirler, executes the requested tasks, and assembles the report
// bundle. Every numeric entry in report.json carries a semantic tag for the
// formula it came from; bundles are byte-identical for a fixed config and
// seed regardless of the worker count.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "capacity.hpp"
#include "json_io.hpp"
#include "oneshot.hpp"
#include "protocol.hpp"

namespace densecode {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ----- Config -----

struct Scenario {
  std::string name = "scenario";
  std::string state;  // bell | purified_product | matrix_file | tmsv_truncated
  double state_p = 0.25;
  int state_copies = 1;
  std::string state_file;
  double state_nbar = 1.0;
  int state_cutoff = 8;

  std::string group;  // weyl_heisenberg | diagonal_phases | pauli_words |
                      // casimir_su2_blocks | collective_rotation
  int group_dim = 2;
  int group_levels = 2;
  int group_sites = 1;
  int group_copies = 1;

  std::vector<std::string> tasks;
  std::uint64_t seed = 1;

  double figure_p = 0.25;
  int figure_n_max = 8;
  std::string figure_mode = "oracle";  // oracle | paper | both

  double oneshot_epsilon = 0.5;
  std::string oneshot_variant = "proof";  // statement | proof

  int sim_n = 0;      // config key "N"
  int sim_t = 1;      // config key "T"
  int sim_m = 2;      // config key "M"
  int sim_seeds = 100;
  int sim_s_grid = 64;
  json codeword_rule = "random";

  bool has_task(const std::string& t) const {
    return std::find(tasks.begin(), tasks.end(), t) != tasks.end();
  }

  static Scenario parse(const json& j);
  static Scenario load(const std::string& path);
};

namespace detail {

template <typename T>
T read_key(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config error: key '" + key + "': " + e.what());
  }
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("config error: " + msg);
}

}  // namespace detail

inline Scenario Scenario::parse(const json& j) {
  if (!j.is_object()) throw ConfigError("config error: top level must be a JSON object");
  static const std::set<std::string> known = {
      "name",         "state",        "state_p",        "state_copies",  "state_file",
      "state_nbar",   "state_cutoff", "group",          "group_dim",     "group_levels",
      "group_sites",  "group_copies", "tasks",          "seed",          "figure_p",
      "figure_n_max", "figure_mode",  "oneshot_epsilon", "oneshot_variant",
      "N",            "T",            "M",              "seeds",         "s_grid",
      "codeword_rule"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key()))
      throw ConfigError("config error: unknown key '" + item.key() + "'");
  }
  Scenario s;
  using detail::read_key;
  using detail::require;
  if (j.contains("name")) s.name = read_key<std::string>(j, "name");
  require(j.contains("state"), "missing key 'state'");
  require(j.contains("group"), "missing key 'group'");
  require(j.contains("tasks"), "missing key 'tasks'");
  s.state = read_key<std::string>(j, "state");
  s.group = read_key<std::string>(j, "group");
  s.tasks = read_key<std::vector<std::string>>(j, "tasks");
  static const std::set<std::string> states = {"bell", "purified_product", "matrix_file",
                                               "tmsv_truncated"};
  static const std::set<std::string> groups = {"weyl_heisenberg", "diagonal_phases",
                                               "pauli_words", "casimir_su2_blocks",
                                               "collective_rotation"};
  static const std::set<std::string> task_names = {"capacities", "figure", "oneshot",
                                                   "simulate", "identities"};
  require(states.count(s.state) > 0, "unknown state '" + s.state + "'");
  require(groups.count(s.group) > 0, "unknown group '" + s.group + "'");
  for (const auto& t : s.tasks) require(task_names.count(t) > 0, "unknown task '" + t + "'");

  if (j.contains("seed")) s.seed = read_key<std::uint64_t>(j, "seed");
  if (j.contains("state_p")) s.state_p = read_key<double>(j, "state_p");
  if (j.contains("state_copies")) s.state_copies = read_key<int>(j, "state_copies");
  if (j.contains("state_file")) s.state_file = read_key<std::string>(j, "state_file");
  if (j.contains("state_nbar")) s.state_nbar = read_key<double>(j, "state_nbar");
  if (j.contains("state_cutoff")) s.state_cutoff = read_key<int>(j, "state_cutoff");
  if (j.contains("group_dim")) s.group_dim = read_key<int>(j, "group_dim");
  if (j.contains("group_levels")) s.group_levels = read_key<int>(j, "group_levels");
  if (j.contains("group_sites")) s.group_sites = read_key<int>(j, "group_sites");
  if (j.contains("group_copies")) s.group_copies = read_key<int>(j, "group_copies");
  if (j.contains("figure_p")) s.figure_p = read_key<double>(j, "figure_p");
  if (j.contains("figure_n_max")) s.figure_n_max = read_key<int>(j, "figure_n_max");
  if (j.contains("figure_mode")) s.figure_mode = read_key<std::string>(j, "figure_mode");
  if (j.contains("oneshot_epsilon")) s.oneshot_epsilon = read_key<double>(j, "oneshot_epsilon");
  if (j.contains("oneshot_variant")) s.oneshot_variant = read_key<std::string>(j, "oneshot_variant");
  if (j.contains("N")) s.sim_n = read_key<int>(j, "N");
  if (j.contains("T")) s.sim_t = read_key<int>(j, "T");
  if (j.contains("M")) s.sim_m = read_key<int>(j, "M");
  if (j.contains("seeds")) s.sim_seeds = read_key<int>(j, "seeds");
  if (j.contains("s_grid")) s.sim_s_grid = read_key<int>(j, "s_grid");
  if (j.contains("codeword_rule")) s.codeword_rule = j.at("codeword_rule");

  require(s.state_p > 0.0 && s.state_p < 1.0, "state_p must lie in (0,1)");
  require(s.state_copies >= 1 && s.state_copies <= 10, "state_copies must lie in [1,10]");
  require(s.state_nbar > 0.0, "state_nbar must be positive");
  require(s.state_cutoff >= 2 && s.state_cutoff <= 64, "state_cutoff must lie in [2,64]");
  require(s.group_dim >= 2 && s.group_dim <= 8, "group_dim must lie in [2,8]");
  require(s.group_levels >= 2 && s.group_levels <= 8, "group_levels must lie in [2,8]");
  require(s.group_sites >= 1 && s.group_sites <= 5, "group_sites must lie in [1,5]");
  require(s.group_copies >= 1 && s.group_copies <= 10, "group_copies must lie in [1,10]");
  require(s.figure_p > 0.0 && s.figure_p <= 0.5, "figure_p must lie in (0,1/2]");
  require(s.figure_n_max >= 1 && s.figure_n_max <= 20, "figure_n_max must lie in [1,20]");
  require(s.figure_mode == "oracle" || s.figure_mode == "paper" || s.figure_mode == "both",
          "figure_mode must be oracle|paper|both");
  require(s.oneshot_epsilon > 0.0 && s.oneshot_epsilon < 1.0, "oneshot_epsilon must lie in (0,1)");
  require(s.oneshot_variant == "statement" || s.oneshot_variant == "proof",
          "oneshot_variant must be statement|proof");
  if (s.state == "matrix_file") require(!s.state_file.empty(), "matrix_file state needs state_file");
  if (s.has_task("simulate")) {
    require(s.sim_n >= 1, "simulate needs N >= 1");
    require(s.sim_t >= 1 && s.sim_n % s.sim_t == 0, "T must divide N");
    require(s.sim_m >= 1 && s.sim_m <= 4096, "M must lie in [1,4096]");
    require(s.sim_seeds >= 1 && s.sim_seeds <= 100000, "seeds must lie in [1,100000]");
    require(s.sim_s_grid >= 2 && s.sim_s_grid <= 4096, "s_grid must lie in [2,4096]");
    const bool rule_ok = (s.codeword_rule.is_string() && s.codeword_rule == "random") ||
                         s.codeword_rule.is_array();
    require(rule_ok, "codeword_rule must be \"random\" or an index list");
  }
  return s;
}

inline Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config error: " + path + ": " + e.what());
  }
  return parse(j);
}

// ----- Builders -----

namespace detail {

inline DensityOp scenario_density(const Scenario& s) {
  if (s.state == "purified_product") {
    Matrix site(2, 2);
    site << 1.0 - s.state_p, 0.0, 0.0, s.state_p;
    Matrix rho = site;
    for (int c = 1; c < s.state_copies; ++c) rho = tensor(rho, site);
    return DensityOp(rho);
  }
  if (s.state == "tmsv_truncated") {
    const double r = s.state_nbar / (1.0 + s.state_nbar);
    RealVector w(s.state_cutoff);
    for (int n = 0; n < s.state_cutoff; ++n) w(n) = std::pow(r, n);
    w /= w.sum();
    Matrix rho = Matrix::Zero(s.state_cutoff, s.state_cutoff);
    for (int n = 0; n < s.state_cutoff; ++n) rho(n, n) = w(n);
    return DensityOp(rho);
  }
  if (s.state == "matrix_file") {
    std::ifstream in(s.state_file);
    if (!in) throw ConfigError("config error: cannot open state_file '" + s.state_file + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("config error: state_file: " + std::string(e.what()));
    }
    try {
      return DensityOp(matrix_from_json(j));
    } catch (const std::exception& e) {
      throw ConfigError("config error: state_file is not a density operator: " +
                        std::string(e.what()));
    }
  }
  throw ConfigError("config error: state '" + s.state + "' has no density form");
}

}  // namespace detail

// The preshared state, always with a uniform purifier so the two-stage
// protocol's alphabet measurements apply directly. Entropy and capacity
// values are purification-independent.
inline PureState build_state(const Scenario& s) {
  if (s.state == "bell") return bell_state();
  const DensityOp rho = detail::scenario_density(s);
  Eigen::Index dim_f = 0;
  if (s.has_task("simulate")) {
    dim_f = s.sim_n;
  } else {
    const RealVector w = psd_spectrum(rho.mat());
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (w(i) > tol::psd) ++dim_f;
  }
  try {
    return purify(rho, dim_f, PurifyMode::Uniform);
  } catch (const std::exception& e) {
    throw ConfigError("config error: cannot purify the state: " + std::string(e.what()));
  }
}

inline Twirler build_twirler(const Scenario& s) {
  if (s.group == "weyl_heisenberg") return weyl_heisenberg(s.group_dim);
  if (s.group == "diagonal_phases") return diagonal_phases(s.group_dim, s.group_levels);
  if (s.group == "pauli_words") return pauli_words(s.group_sites);
  if (s.group == "casimir_su2_blocks") return casimir_su2_blocks(s.group_copies);
  return collective_rotation(s.group_copies);
}

inline std::vector<Matrix> scenario_codewords(const Scenario& s, const Twirler& tw, Sampler& rng) {
  if (s.codeword_rule.is_string()) {
    if (s.group == "casimir_su2_blocks" || s.group == "collective_rotation")
      return random_collective_codewords(s.group_copies, s.sim_m, rng);
    if (!tw.rep || tw.rep->elements_are_generators)
      throw ConfigError("config error: random codewords need a finite group or a collective action");
    return random_rep_codewords(*tw.rep, s.sim_m, rng);
  }
  std::vector<int> idx;
  try {
    idx = s.codeword_rule.get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ConfigError("config error: codeword_rule: " + std::string(e.what()));
  }
  if (static_cast<int>(idx.size()) != s.sim_m)
    throw ConfigError("config error: codeword_rule list length must equal M");
  if (!tw.rep || tw.rep->elements_are_generators)
    throw ConfigError("config error: explicit codewords need a finite group element list");
  try {
    return rep_codewords(*tw.rep, idx);
  } catch (const std::exception& e) {
    throw ConfigError("config error: codeword_rule: " + std::string(e.what()));
  }
}

// ----- Report helpers -----

inline json tagged(double value, const char* tag) {
  return json{{"value", value}, {"tag", tag}};
}

inline const char* schur_mode_name(SchurMode mode) {
  return mode == SchurMode::Oracle ? "oracle" : "paper";
}

inline std::string figure_csv_text(const std::vector<SchurRow>& rows) {
  std::string out = "N,p,c_local,c_oneway,c_global,dim_mode\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%.10g,%s\n", r.n, r.p, r.c_local,
                  r.c_oneway, r.c_global, schur_mode_name(r.mode));
    out += buf;
  }
  return out;
}

// Deterministic fan-out: work items are indexed, every worker writes only
// its own slots, so the aggregate is independent of the worker count.
template <typename Fn>
inline void parallel_for_indexed(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct RunResult {
  json report;
  std::string figure_csv;
  std::vector<std::string> sim_lines;
  bool has_figure = false;
  bool has_sim = false;
};

// ----- The runner -----

inline RunResult run_scenario(const Scenario& s, int threads = 1) {
  RunResult out;
  out.report = json::object();
  out.report["schema_version"] = 1;
  out.report["name"] = s.name;
  out.report["seed"] = s.seed;
  out.report["state"] = s.state;
  out.report["group"] = s.group;
  out.report["tasks"] = s.tasks;
  if (s.tasks.empty()) return out;

  PureState psi = build_state(s);
  Twirler tw = build_twirler(s);
  if (tw.dim() != psi.layout().dim_a)
    throw ConfigError("config error: group dimension " + std::to_string(tw.dim()) +
                      " does not match the state's A dimension " +
                      std::to_string(psi.layout().dim_a));
  const bool needs_blocks = s.has_task("capacities") || s.has_task("oneshot") ||
                            s.has_task("simulate");
  if (needs_blocks && (!tw.mult_free || !tw.blocks))
    throw ConfigError("config error: group '" + s.group +
                      "' is not multiplicity-free; only the identities/figure tasks apply");
  Sampler base(s.seed);

  if (s.has_task("capacities")) {
    CapacityReport cr;
    try {
      cr = capacity_report(psi, tw, s.name);
      cr.validate();
    } catch (const std::runtime_error& e) {
      throw InvariantError(std::string("capacities: ") + e.what());
    }
    out.report["capacities"] = json{
        {"c_local", tagged(cr.c_local, "capacity/local-decoder")},
        {"c_oneway", tagged(cr.c_oneway, "capacity/one-way-locality")},
        {"c_global", tagged(cr.c_global, "capacity/global-decoder")},
        {"h_sector_label", tagged(cr.h_k, "entropy/sector-label")},
        {"h_purifier", tagged(cr.h_f, "entropy/purifier")},
        {"h_purifier_given_sector", tagged(cr.h_f_given_k, "entropy/sector-conditional")},
    };
  }

  if (s.has_task("oneshot")) {
    const XiState xi = symmetric_decomposition(psi, *tw.blocks);
    const LegendreProfile profile = LegendreProfile::from_xi(xi);
    const RateVariant variant =
        s.oneshot_variant == "statement" ? RateVariant::Statement : RateVariant::Proof;
    const OneShotRate rate = oneshot_achievable_rate(profile, s.oneshot_epsilon, variant);
    const double l_at_r = legendre(profile, rate.r_bits);
    const Matrix psi_a = partial_trace(psi.projector(), psi.layout(), Subsystem::A);
    const DensityOp g = tw.twirl(DensityOp(psi_a));
    const ConverseBest best = strong_converse_best(g, rate.rate_bits);
    const char* rate_tag =
        variant == RateVariant::Statement ? "rate/one-shot-statement" : "rate/one-shot-proof";
    out.report["oneshot"] = json{
        {"R", tagged(rate.r_bits, "legendre/inverse-point")},
        {"L", tagged(l_at_r, "legendre/profile")},
        {"variant", s.oneshot_variant},
        {"epsilon", tagged(s.oneshot_epsilon, "input/error-budget")},
        {"rate_bits", tagged(rate.rate_bits, rate_tag)},
        {"alpha_star", tagged(best.alpha, "bound/petz-meta-converse")},
        {"bound", tagged(best.bound, "bound/petz-meta-converse")},
    };
  }

  if (s.has_task("figure")) {
    std::vector<SchurRow> rows;
    const int n_lo = 1;
    if (s.figure_mode != "paper") {
      auto r = figure_series(n_lo, s.figure_n_max, s.figure_p, SchurMode::Oracle);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    if (s.figure_mode != "oracle") {
      auto r = figure_series(n_lo, s.figure_n_max, s.figure_p, SchurMode::Paper);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    out.figure_csv = figure_csv_text(rows);
    out.has_figure = true;
    json fig = json::object();
    fig["rows"] = rows.size();
    fig["file"] = "figure.csv";
    if (s.figure_n_max >= 2) {
      const SchurRow oracle2 = schur_example(2, s.figure_p, SchurMode::Oracle);
      const SchurRow paper2 = schur_example(2, s.figure_p, SchurMode::Paper);
      fig["n2_oracle_c_oneway"] = tagged(oracle2.c_oneway, "capacity/one-way-locality");
      fig["n2_printed_factor_c_oneway"] =
          tagged(paper2.c_oneway, "capacity/printed-dimension-factor");
      fig["n2_discrepancy"] =
          tagged(paper2.c_oneway - oracle2.c_oneway, "capacity/printed-dimension-factor");
    }
    out.report["figure"] = fig;
  }

  if (s.has_task("simulate")) {
    if (psi.layout().dim_f != s.sim_n)
      throw ConfigError("config error: N = " + std::to_string(s.sim_n) +
                        " does not match the purifier dimension " +
                        std::to_string(psi.layout().dim_f));
    Sampler hash_rng = base.derive("hash", 0);
    const HashPartition hash = build_hash(s.sim_n, s.sim_t, hash_rng);
    struct SeedResult {
      double error = 0.0, bound = 0.0, delta = 0.0;
    };
    std::vector<SeedResult> results(s.sim_seeds);
    std::vector<std::string> errors(s.sim_seeds);
    parallel_for_indexed(s.sim_seeds, threads, [&](int i) {
      try {
        Sampler rng = base.derive("codewords", i);
        const auto words = scenario_codewords(s, tw, rng);
        const TwoStageResult r = two_stage_protocol(psi, tw, hash, words, s.sim_s_grid);
        results[i] = {r.exact_error, r.bound, r.delta};
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    for (const auto& e : errors)
      if (!e.empty()) throw InvariantError("simulate: " + e);
    double mean = 0.0, bound = 0.0, delta = 0.0;
    for (const auto& r : results) {
      mean += r.error;
      bound += r.bound;
      delta += r.delta;
    }
    mean /= s.sim_seeds;
    bound /= s.sim_seeds;
    delta /= s.sim_seeds;
    double var = 0.0;
    for (const auto& r : results) var += (r.error - mean) * (r.error - mean);
    const double sdev = std::sqrt(var / std::max(1, s.sim_seeds - 1));
    for (int i = 0; i < s.sim_seeds; ++i) {
      json line = json{{"seed", i},
                       {"exact_error", results[i].error},
                       {"bound", results[i].bound},
                       {"delta", results[i].delta}};
      out.sim_lines.push_back(line.dump());
    }
    out.has_sim = true;
    const double slack = 3.0 * sdev / std::sqrt(static_cast<double>(s.sim_seeds));
    const bool within = mean <= bound + slack + 1e-12;
    out.report["simulate"] = json{
        {"seeds", s.sim_seeds},
        {"rate_bits", tagged(std::log2(static_cast<double>(s.sim_m)), "protocol/rate")},
        {"mean_exact_error", tagged(mean, "protocol/exact-error")},
        {"std_exact_error", tagged(sdev, "protocol/exact-error")},
        {"mean_bound", tagged(bound, "bound/random-code")},
        {"mean_delta", tagged(delta, "protocol/trimming-loss")},
        {"hash_family", hash.family},
        {"within_bound", within},
        {"file", "sim.jsonl"},
    };
    if (!within)
      throw InvariantError("simulate: mean exact error exceeds the random-coding bound plus slack");
  }

  if (s.has_task("identities")) {
    Sampler rng = base.derive("identities", 0);
    const IdentityReport m6 =
        m6_identity_check(200, {{2, 2}, {2, 3}, {3, 3}}, rng);
    Twirler wh2 = weyl_heisenberg(2);
    const TransposeReport tr = transpose_encoder_experiment(bell_state(), wh2, rng, Matrix(), 1000);
    out.report["identities"] = json{
        {"m6_max_residual", tagged(m6.max_residual, "identity/abs-partial-transpose")},
        {"m6_max_residual_rotated",
         tagged(m6.max_residual_rotated, "identity/abs-partial-transpose")},
        {"transpose_choi_min_eig", tagged(tr.choi_min_eig, "witness/transpose-encoder")},
        {"transpose_output_min_eig", tagged(tr.output_min_eig, "witness/transpose-encoder")},
        {"min_product_povm_value",
         tagged(tr.min_product_value, "witness/separable-nonnegativity")},
    };
    if (m6.max_residual > 1e-8 || m6.max_residual_rotated > 1e-8)
      throw InvariantError("identities: partial-transpose factorization residual above 1e-8");
    if (std::abs(tr.choi_min_eig + 0.5) > 1e-9 || std::abs(tr.output_min_eig + 0.5) > 1e-9)
      throw InvariantError("identities: transpose witness eigenvalues moved from -1/2");
    if (tr.min_product_value < -1e-9)
      throw InvariantError("identities: a product measurement element saw negative mass");
  }

  return out;
}

}  // namespace densecode
