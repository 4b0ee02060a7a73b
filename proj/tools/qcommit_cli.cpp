// Experiment runner: parameter sweeps with measured-vs-bound reports for the
// commitment scheme, the no-go attacks, and the Hamiltonicity protocol.

#include <CLI11.hpp>
#include <atomic>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "qcommit/attacks.hpp"
#include "qcommit/commit.hpp"
#include "qcommit/serialize.hpp"
#include "qcommit/zk.hpp"

using namespace qcommit;
using qcommit::io::json;

namespace {

constexpr double kProbTol = 1e-7;

struct Report {
  std::string command;
  json params = json::object();
  std::vector<json> rows;

  void add(json row) { rows.push_back(std::move(row)); }
};

json num(double v) { return io::rounded12(v); }

// status: "pass" / "fail", or "vacuous" when the bound exceeds 1
json bound_row(json row, double measured, double bound, double tol) {
  const bool ok = measured <= bound + tol;
  row["measured"] = num(measured);
  row["bound"] = num(bound);
  row["status"] = !ok ? "fail" : (bound > 1.0 ? "vacuous" : "pass");
  row["pass"] = ok;
  return row;
}

json lower_bound_row(json row, double measured, double bound, double tol) {
  const bool ok = measured >= bound - tol;
  row["measured"] = num(measured);
  row["bound"] = num(bound);
  row["status"] = !ok ? "fail" : (bound < 0.0 ? "vacuous" : "pass");
  row["pass"] = ok;
  return row;
}

bool all_pass(const Report& r) {
  for (const auto& row : r.rows)
    if (row.contains("pass") && !row.at("pass").get<bool>()) return false;
  return true;
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return io::fmt12(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_report(const Report& r, const std::string& out_path, const std::string& format) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file " + out_path);
    os = &file;
  }
  if (format == "json") {
    json doc{{"command", r.command}, {"params", r.params}, {"rows", r.rows}, {"all_pass", all_pass(r)}};
    *os << doc.dump(2) << "\n";
    return;
  }
  // csv: union of keys in sorted order (rows of one command share a schema)
  std::set<std::string> columns;
  for (const auto& row : r.rows)
    for (const auto& [k, v] : row.items()) columns.insert(k);
  bool first = true;
  for (const auto& c : columns) {
    *os << (first ? "" : ",") << c;
    first = false;
  }
  *os << "\n";
  for (const auto& row : r.rows) {
    first = true;
    for (const auto& c : columns) {
      *os << (first ? "" : ",") << (row.contains(c) ? csv_cell(row.at(c)) : "");
      first = false;
    }
    *os << "\n";
  }
}

// ordered parallel map: results come back in input order regardless of the
// completion order of the workers
template <typename In, typename Fn>
std::vector<json> parallel_rows(const std::vector<In>& inputs, int jobs, Fn&& fn) {
  std::vector<json> out(inputs.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = fn(inputs[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int n = std::min<int>(jobs, static_cast<int>(inputs.size()));
  for (int t = 0; t < n; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= inputs.size()) return;
        out[i] = fn(inputs[i]);
      }
    });
  for (auto& t : pool) t.join();
  return out;
}

struct CommonOpts {
  std::string out;
  std::string format = "json";
  std::string mode = "exact";
  int trials = 200;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--mode", o.mode, "exact or sample")->check(CLI::IsMember({"exact", "sample"}));
  cmd->add_option("--trials", o.trials, "sampled keys in sample mode");
  cmd->add_option("--seed", o.seed, "rng seed (required in sample mode)");
  cmd->add_option("--jobs", o.jobs, "parallel sweep workers");
}

void require_sample_seed(const CommonOpts& o) {
  if (o.mode == "sample" && !o.seed)
    throw CLI::ValidationError("--seed is required in sample mode");
}

// tables with weights: exhaustive classes in exact mode, seeded keys otherwise
std::vector<std::pair<FunctionTable, double>> scheme_tables(const SchemeParams& p,
                                                            const CommonOpts& o) {
  std::vector<std::pair<FunctionTable, double>> tables;
  if (o.mode == "exact") {
    for_each_table_class(p, [&](const FunctionTable& t, double w) { tables.emplace_back(t, w); });
  } else {
    std::mt19937_64 rng(*o.seed);
    KWiseFamily fam = p.family();
    const double w = 1.0 / o.trials;
    for (int i = 0; i < o.trials; ++i) tables.emplace_back(fam.materialize(fam.key_random(rng)), w);
  }
  return tables;
}

std::string table_tag(const FunctionTable& t) {
  std::string s = "H:";
  for (std::size_t i = 0; i < t.table.size(); ++i) {
    if (i) s += "-";
    s += std::to_string(t.table[i]);
  }
  return s;
}

// --- subcommands ---

Report run_hashcheck(int lambda, int n_out, int k) {
  Report r;
  r.command = "hashcheck";
  r.params = {{"lambda", lambda}, {"n_out", n_out}, {"k", k}};
  KWiseFamily fam(lambda, n_out, k);
  auto rep = verify_kwise(fam);
  json row{{"check", "kwise-uniformity"},
           {"keys", rep.keys_checked},
           {"subsets", rep.subsets_checked},
           {"status", rep.pass ? "pass" : "fail"},
           {"pass", rep.pass}};
  if (!rep.pass) row["violating_inputs"] = rep.violating_inputs;
  r.add(std::move(row));
  return r;
}

Report run_hiding(const SchemeParams& p, const CommonOpts& o, bool zhandry) {
  Report r;
  r.command = "hiding";
  r.params = {{"lambda", p.lambda}, {"n_out", p.n_out}, {"m", p.m}, {"t", p.t}, {"k", p.k()}};
  const double ref = prg_reference_bound(p);
  if (o.mode == "sample") {
    const double adv = hiding_advantage_sampled(p, o.trials, *o.seed);
    json row = bound_row({{"check", "advantage-vs-reference"}, {"trials", o.trials}}, adv, ref, kProbTol);
    r.add(std::move(row));
    return r;
  }
  const double adv = hiding_advantage(p, Averaging::family);
  r.add(bound_row({{"check", "advantage-vs-reference"}}, adv, ref, kProbTol));
  if (zhandry) {
    for (int b : {0, 1}) {
      auto z = zhandry_check(p, b, 1e-9);
      json row{{"check", "zhandry-equality"}, {"b", b},
               {"family_keys", z.family_keys}, {"tables", z.tables}};
      const double measured = z.exact_td ? *z.exact_td : z.td_upper;
      row = bound_row(std::move(row), measured, 1e-9, 0.0);
      row["td_is_upper_bound"] = !z.exact_td.has_value();
      row["pass"] = z.pass;
      row["status"] = z.pass ? "pass" : "fail";
      r.add(std::move(row));
    }
  }
  return r;
}

Report run_binding(const SchemeParams& p, const CommonOpts& o) {
  Report r;
  r.command = "binding";
  r.params = {{"lambda", p.lambda}, {"n_out", p.n_out}, {"m", p.m}, {"k", p.k()}};
  auto tables = scheme_tables(p, o);
  auto rows = parallel_rows(tables, o.jobs, [&](const std::pair<FunctionTable, double>& entry) {
    SchemeInstance s = crqs_instance(p, entry.first);
    CommitterStrategy c0 = uhlmann_strategy(s, 0, 0);
    CommitterStrategy c1 = uhlmann_strategy(s, 0, 1);
    auto probe = sum_binding_probe(c0, c1, s);
    const double bound = 1.0 + std::exp2(-p.m / 3.0) + 2.0 * s.epsilon;
    json row{{"table", table_tag(entry.first)},
             {"weight", num(entry.second)},
             {"epsilon", num(s.epsilon)},
             {"p0", num(probe.p0)},
             {"p1", num(probe.p1)}};
    return bound_row(std::move(row), probe.p0 + probe.p1, bound, kProbTol);
  });
  for (auto& row : rows) r.add(std::move(row));
  return r;
}

json outcome_probs(const ExperimentOutput& out) {
  return json{{"p0", num(out.prob[0])},
              {"p1", num(out.prob[1])},
              {"p_bot", num(out.prob[ExperimentOutput::kBot])},
              {"p_fail", num(out.prob[ExperimentOutput::kFail])}};
}

Report run_extractor(const SchemeParams& p, const CommonOpts& o, int random_strategies,
                     const std::string& strategy_path) {
  Report r;
  r.command = "extractor";
  r.params = {{"lambda", p.lambda}, {"n_out", p.n_out}, {"m", p.m}, {"k", p.k()}};
  auto tables = scheme_tables(p, o);
  std::optional<CommitterStrategy> loaded;
  if (!strategy_path.empty())
    loaded = io::strategy_from_json(io::load_json_file(strategy_path));
  auto rows = parallel_rows(tables, o.jobs, [&](const std::pair<FunctionTable, double>& entry) {
    SchemeInstance s = crqs_instance(p, entry.first);
    auto rep = binding_report(loaded ? *loaded : uhlmann_strategy(s, 0, 1), s);
    json row{{"table", table_tag(entry.first)},
             {"strategy", loaded ? strategy_path : "uhlmann"},
             {"epsilon", num(rep.epsilon)},
             {"fail_mass", num(rep.fail_mass)},
             {"real", outcome_probs(rep.real)},
             {"ideal", outcome_probs(rep.ideal)}};
    return bound_row(std::move(row), rep.gap, rep.bound, kProbTol);
  });
  for (auto& row : rows) r.add(std::move(row));
  if (random_strategies > 0) {
    if (!o.seed) throw CLI::ValidationError("--seed is required with --random-strategies");
    std::mt19937_64 rng(*o.seed);
    SchemeInstance s = crqs_instance(p, p.family().key_random(rng));
    std::vector<RegisterLayout::Entry> regs;
    for (int i = 1; i <= p.m; ++i) {
      regs.push_back({commit_reg(i), p.n_out});
      regs.push_back({reveal_reg(i), efi::pad_width(p.lambda, p.n_out)});
    }
    regs.push_back({"W", 1});
    RegisterLayout layout(std::move(regs));
    std::vector<std::string> act;
    for (int i = 1; i <= p.m; ++i) act.push_back(reveal_reg(i));
    act.push_back("W");
    std::normal_distribution<double> gauss;
    for (int n = 0; n < random_strategies; ++n) {
      Vec amps(static_cast<Eigen::Index>(layout.dim()));
      for (Eigen::Index i = 0; i < amps.size(); ++i) amps[i] = cplx(gauss(rng), gauss(rng));
      amps.normalize();
      CommitterStrategy c;
      c.initial = PureState(amps, layout);
      c.announced_bit = static_cast<int>(rng() & 1);
      // random reveal: unitary from the QR of a Gaussian matrix
      const auto d = Eigen::Index{1} << (layout.total_qubits() - p.m * p.n_out);
      Mat gmat(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) gmat(i, j) = cplx(gauss(rng), gauss(rng));
      Eigen::HouseholderQR<Mat> qr(gmat);
      c.reveal = Unitary{Mat(qr.householderQ()), act};
      auto rep = binding_report(c, s);
      json row{{"table", table_tag(p.family().materialize(p.family().key_random(rng)))},
               {"strategy", "random-" + std::to_string(n)},
               {"epsilon", num(rep.epsilon)},
               {"fail_mass", num(rep.fail_mass)}};
      r.add(bound_row(std::move(row), rep.gap, rep.bound, kProbTol));
    }
  }
  return r;
}

Report run_nogo_crs(const std::string& scheme_path) {
  Report r;
  r.command = "nogo-crs";
  r.params = {{"scheme", scheme_path}};
  json doc = io::load_json_file(scheme_path);
  json schemes = doc.is_array() ? doc : json::array({doc});
  int index = 0;
  for (const auto& entry : schemes) {
    CrsScheme s = io::crs_scheme_from_json(entry.contains("scheme") ? entry.at("scheme") : entry);
    auto hiding = attacks::crs_hiding_attack(s);
    auto binding = attacks::crs_binding_attack(s);
    auto tradeoff = attacks::crs_tradeoff(s);
    double sum_pf = 0;
    for (std::size_t k = 0; k < s.key_prob.size(); ++k)
      sum_pf += s.key_prob[k] * binding.per_key_fidelity[k];
    const bool attains = std::abs(binding.p1 - sum_pf) <= 1e-9;
    json row{{"scheme_index", index++},
             {"name", entry.contains("name") ? entry.at("name").get<std::string>() : ""},
             {"hiding_advantage", num(hiding.advantage)},
             {"binding_success", num(binding.p1)},
             {"sum_pk_fidelity", num(sum_pf)},
             {"tradeoff_residual", num(tradeoff.residual)},
             {"status", attains && tradeoff.holds ? "pass" : "fail"},
             {"pass", attains && tradeoff.holds}};
    r.add(std::move(row));
  }
  return r;
}

Report run_nogo_corr(const std::string& scheme_path) {
  Report r;
  r.command = "nogo-corr";
  r.params = {{"scheme", scheme_path}, {"threshold", num(attacks::correlated_threshold())}};
  json doc = io::load_json_file(scheme_path);
  json schemes = doc.is_array() ? doc : json::array({doc});
  int index = 0;
  for (const auto& entry : schemes) {
    CorrelatedScheme s =
        io::correlated_scheme_from_json(entry.contains("scheme") ? entry.at("scheme") : entry);
    auto res = attacks::correlated_attack(s, kProbTol);
    const double eps_corr = attacks::epsilon_correlation(s.joint).epsilon;
    json row0 = lower_bound_row({{"scheme_index", index}, {"check", "p0"},
                                 {"eps_product", num(res.eps_product)},
                                 {"eps_correlation", num(eps_corr)}},
                                res.p0, res.bound_p0, kProbTol);
    json row1 = lower_bound_row({{"scheme_index", index}, {"check", "p1"},
                                 {"eps_product", num(res.eps_product)},
                                 {"eps_correlation", num(eps_corr)},
                                 {"hiding_advantage", num(res.hiding_advantage)}},
                                res.p1, res.bound_p1, kProbTol);
    r.add(std::move(row0));
    r.add(std::move(row1));
    ++index;
  }
  return r;
}

Report run_nogo_copies(const SchemeParams& p, double threshold) {
  Report r;
  r.command = "nogo-copies";
  r.params = {{"lambda", p.lambda}, {"n_out", p.n_out}, {"m", p.m}, {"t", p.t}, {"k", p.k()}};
  auto res = attacks::unbounded_copy_attack(p, threshold);
  const bool pass = res.binding_broken || res.hiding_attacked;
  json row{{"check", "dichotomy"},
           {"key_identification", num(res.key_identification)},
           {"avg_td", num(res.avg_td)},
           {"p0", num(res.p0)},
           {"p1", num(res.p1)},
           {"p0_plus_p1", num(res.p0 + res.p1)},
           {"hiding_advantage", num(res.hiding_advantage)},
           {"binding_broken", res.binding_broken},
           {"hiding_attacked", res.hiding_attacked},
           {"status", pass ? "pass" : "fail"},
           {"pass", pass}};
  r.add(std::move(row));
  return r;
}

std::optional<HamiltonianCycle> find_cycle(const Graph& g) {
  std::vector<int> order(static_cast<std::size_t>(g.n));
  std::iota(order.begin(), order.end(), 0);
  do {
    HamiltonianCycle h{order};
    if (h.valid_in(g)) return h;
  } while (std::next_permutation(order.begin(), order.end()));
  return std::nullopt;
}

Report run_zk(const SchemeParams& p, const std::string& graph_path, int loops) {
  Report r;
  r.command = "zk";
  r.params = {{"lambda", p.lambda}, {"n_out", p.n_out}, {"m", p.m}, {"graph", graph_path}};
  std::vector<std::pair<std::string, Graph>> graphs;
  if (!graph_path.empty()) {
    if (graph_path.size() > 5 && graph_path.substr(graph_path.size() - 5) == ".json")
      graphs.emplace_back(graph_path, io::graph_from_json(io::load_json_file(graph_path)));
    else {
      std::ifstream in(graph_path);
      if (!in) throw std::runtime_error("cannot open " + graph_path);
      std::stringstream buf;
      buf << in.rdbuf();
      graphs.emplace_back(graph_path, io::graph_from_edge_list(buf.str()));
    }
  } else {
    graphs.emplace_back("K3", Graph::complete(3));
    graphs.emplace_back("K4", Graph::complete(4));
    graphs.emplace_back("star4", Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}));
  }
  std::mt19937_64 rng(12345);
  for (const auto& [name, g] : graphs) {
    SchemeInstance s = crqs_instance(p, p.family().key_random(rng));
    auto witness = find_cycle(g);
    if (witness) {
      const double c = completeness(g, *witness, s);
      json row{{"graph", name}, {"check", "completeness"}};
      row["measured"] = num(c);
      row["bound"] = num(1.0);
      row["status"] = std::abs(c - 1.0) <= 1e-9 ? "pass" : "fail";
      row["pass"] = std::abs(c - 1.0) <= 1e-9;
      r.add(std::move(row));
      VerifierModel v;
      auto sim = simulate(g, *witness, s, v, loops);
      json srow{{"graph", name},
                {"check", "simulator"},
                {"verifier_class", "measurable-challenge"},
                {"halt_probability", num(sim.halt_probability)},
                {"fail_probability", num(sim.fail_probability)},
                {"hiding_term", num(sim.hiding_term)}};
      r.add(bound_row(std::move(srow), sim.real_sim_td,
                      sim.per_bit_td_sum + sim.fail_probability, 1e-9));
    } else {
      std::vector<int> identity(static_cast<std::size_t>(g.n));
      std::iota(identity.begin(), identity.end(), 0);
      auto cert = soundness_experiment(honest_style_prover(g, identity, s), g, s, kProbTol);
      json row{{"graph", name},
               {"check", "soundness-honest-style"},
               {"ideal_acceptance", num(cert.ideal_acceptance)},
               {"gap_sum", num(cert.gap_sum)}};
      r.add(bound_row(std::move(row), cert.acceptance, cert.bound, kProbTol));
      auto fake = fake_graph_prover(Graph::complete(g.n), *find_cycle(Graph::complete(g.n)), s);
      auto cert2 = soundness_experiment(fake, g, s, kProbTol);
      json row2{{"graph", name},
                {"check", "soundness-fake-graph"},
                {"ideal_acceptance", num(cert2.ideal_acceptance)},
                {"gap_sum", num(cert2.gap_sum)}};
      r.add(bound_row(std::move(row2), cert2.acceptance, cert2.bound, kProbTol));
    }
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact desk-scale experiments for keyed quantum commitments"};
  app.require_subcommand(1);

  SchemeParams params;
  CommonOpts common;
  bool zhandry = true;
  int random_strategies = 0;
  double threshold = 0.5;
  int loops = 20;
  int k_flag = 0;
  std::string scheme_path, graph_path, strategy_path;

  auto add_params = [&](CLI::App* cmd, bool with_t) {
    cmd->add_option("--lambda", params.lambda, "input bits")->required();
    cmd->add_option("--nout", params.n_out, "output bits")->required();
    cmd->add_option("--m", params.m, "parallel repetitions");
    if (with_t) cmd->add_option("--t", params.t, "adversary copy budget");
    cmd->add_option("--k", k_flag, "override the derived family degree 2m(t+1)");
  };

  auto* hiding = app.add_subcommand("hiding", "t-copy hiding advantage and the family-vs-random check");
  add_params(hiding, true);
  hiding->add_flag("--zhandry,!--no-zhandry", zhandry, "run the family-vs-all-functions comparison");
  add_common(hiding, common);

  auto* binding = app.add_subcommand("binding", "sum-binding attack sweep against the analytic envelope");
  add_params(binding, true);
  add_common(binding, common);

  auto* extractor = app.add_subcommand("extractor", "real/ideal experiment gaps");
  add_params(extractor, true);
  extractor->add_option("--random-strategies", random_strategies, "extra random committers");
  extractor->add_option("--strategy", strategy_path, "committer strategy JSON to evaluate instead");
  add_common(extractor, common);

  auto* nogo_crs = app.add_subcommand("nogo-crs", "CRS-model tradeoff attack on toy schemes");
  nogo_crs->add_option("--scheme", scheme_path, "scheme JSON (object or array)")->required();
  add_common(nogo_crs, common);

  auto* nogo_corr = app.add_subcommand("nogo-corr", "correlated-randomness attack");
  nogo_corr->add_option("--scheme", scheme_path, "scheme JSON (object or array)")->required();
  add_common(nogo_corr, common);

  auto* nogo_copies = app.add_subcommand("nogo-copies", "unbounded-copy dichotomy");
  add_params(nogo_copies, true);
  nogo_copies->add_option("--threshold", threshold, "trace-distance threshold for the dichotomy");
  add_common(nogo_copies, common);

  auto* zk = app.add_subcommand("zk", "Hamiltonicity protocol checks");
  add_params(zk, false);
  zk->add_option("--graph", graph_path, "graph file (.json or edge list); default built-in suite");
  zk->add_option("--loops", loops, "simulator repetition count");
  add_common(zk, common);

  auto* hashcheck = app.add_subcommand("hashcheck", "exact k-wise independence verification");
  hashcheck->add_option("--lambda", params.lambda)->required();
  hashcheck->add_option("--nout", params.n_out)->required();
  hashcheck->add_option("--k", k_flag, "independence degree")->required();
  add_common(hashcheck, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (k_flag > 0) params.k_override = k_flag;
    require_sample_seed(common);
    Report report;
    if (*hiding) report = run_hiding(params, common, zhandry);
    if (*binding) report = run_binding(params, common);
    if (*extractor) report = run_extractor(params, common, random_strategies, strategy_path);
    if (*nogo_crs) report = run_nogo_crs(scheme_path);
    if (*nogo_corr) report = run_nogo_corr(scheme_path);
    if (*nogo_copies) report = run_nogo_copies(params, threshold);
    if (*zk) report = run_zk(params, graph_path, loops);
    if (*hashcheck) report = run_hashcheck(params.lambda, params.n_out, k_flag);
    write_report(report, common.out, common.format);
    return all_pass(report) ? 0 : 1;
  } catch (const cap_exceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
