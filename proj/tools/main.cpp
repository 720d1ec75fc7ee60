#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sparsepack/bench.hpp"
#include "sparsepack/generator.hpp"
#include "sparsepack/instance_io.hpp"
#include "sparsepack/lp.hpp"
#include "sparsepack/reconstruction.hpp"
#include "sparsepack/rng.hpp"
#include "sparsepack/solvers.hpp"
#include "sparsepack/sparsifier.hpp"
#include "sparsepack/stochastic.hpp"

namespace {

using namespace sparsepack;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open " + out_path);
  f << text << '\n';
}

nlohmann::json solve_result_json(const SolveResult& r) {
  nlohmann::json j;
  j["value"] = r.value;
  j["status"] = to_string(r.status);
  j["nodes"] = r.nodes;
  j["wall_time_s"] = r.wall_time_s;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.assignment.pairs)
    pairs.push_back({p.first, p.second});
  j["assignment"] = std::move(pairs);
  return j;
}

Budget make_budget(double ms, std::uint64_t nodes) {
  Budget b;
  if (ms > 0) b.max_wall_time_s = ms / 1000.0;
  if (nodes > 0) b.max_nodes = nodes;
  return b;
}

Marginal parse_marginal(const std::string& name) {
  return marginal_from_name(name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bucket sparsifiers, desk-scale exact solvers, and the "
               "three-run benchmark pipeline for stochastic KP/MKP/GAP"};
  app.require_subcommand(1);

  std::string out_path;
  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--threads", threads, "worker threads where applicable");

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance (or a grid)")->fallthrough();
  int gen_n = 100, gen_m = 1;
  double gen_rho = 0.0, gen_rt = 5.0;
  std::string gen_vm = "uniform[0;100]", gen_wm = "uniform[1;20]";
  bool gen_grid = false, gen_full = false;
  double gen_scale = 1.0;
  gen->add_option("--n", gen_n, "items");
  gen->add_option("--m", gen_m, "knapsacks");
  gen->add_option("--rho", gen_rho, "copula correlation in [-1,1]");
  gen->add_option("--redundancy", gen_rt, "redundancy target");
  gen->add_option("--value-marginal", gen_vm, "e.g. uniform[0;100]");
  gen->add_option("--weight-marginal", gen_wm,
                  "e.g. truncnorm[10;5;1;30]");
  gen->add_flag("--grid", gen_grid,
                "emit the whole experiment grid to --out directory");
  gen->add_flag("--full-grid", gen_full,
                "use the full grid instead of the desk-scale one (slow)");
  gen->add_option("--scale", gen_scale, "item-count scale for --grid");

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance")->fallthrough();
  std::string solve_in, solve_method = "exact";
  double solve_budget_ms = 0;
  std::uint64_t solve_budget_nodes = 0;
  solve->add_option("instance", solve_in, "instance JSON")->required();
  solve->add_option("--method", solve_method, "exact|lp|greedy");
  solve->add_option("--budget-ms", solve_budget_ms, "wall budget (ms)");
  solve->add_option("--budget-nodes", solve_budget_nodes, "node budget");

  // sparsify
  auto* spars = app.add_subcommand("sparsify", "build a query set")->fallthrough();
  std::string sp_in, sp_oracle = "sampled", sp_mode = "theory";
  double sp_eps = 0.2, sp_p = 1.0, sp_tau = 0, sp_alpha = 0;
  int sp_k = 0, sp_trials = 200;
  double sp_oracle_m = 0.0;
  std::vector<double> sp_oracle_list;
  spars->add_option("instance", sp_in, "instance JSON")->required();
  spars->add_option("--epsilon", sp_eps, "accuracy parameter");
  spars->add_option("--p", sp_p, "activation probability");
  spars->add_option("--oracle", sp_oracle, "per|global|lp|sampled");
  spars->add_option("--oracle-value", sp_oracle_m,
                    "scale for --oracle global");
  spars->add_option("--oracle-list", sp_oracle_list,
                    "per-knapsack scales for --oracle per");
  spars->add_option("--oracle-trials", sp_trials, "samples for --oracle sampled");
  spars->add_option("--tau-override", sp_tau, "practical-mode tau");
  spars->add_option("--alpha", sp_alpha, "practical-mode pass count");
  spars->add_option("--K", sp_k, "practical-mode bucket count");
  spars->add_option("--mode", sp_mode, "theory|practical");

  // eval
  auto* eval = app.add_subcommand("eval", "Monte Carlo sparsifier ratio")->fallthrough();
  std::string ev_in, ev_query;
  double ev_p = 0.5;
  int ev_trials = 500;
  double ev_budget_ms = 0;
  eval->add_option("instance", ev_in, "instance JSON")->required();
  eval->add_option("--query-file", ev_query, "QueryResult JSON")->required();
  eval->add_option("--p", ev_p, "activation probability");
  eval->add_option("--trials", ev_trials, "Monte Carlo trials");
  eval->add_option("--budget-ms", ev_budget_ms, "per-solve wall budget (ms)");

  // verify
  auto* verify =
      app.add_subcommand("verify",
                         "replay the reconstruction and check the lemmas")
          ->fallthrough();
  std::string vf_in, vf_query;
  double vf_p = 0.5, vf_eps = 0.0;
  int vf_trials = 100;
  verify->add_option("instance", vf_in, "instance JSON")->required();
  verify->add_option("--query-file", vf_query, "QueryResult JSON")
      ->required();
  verify->add_option("--p", vf_p, "activation probability");
  verify->add_option("--trials", vf_trials, "realizations");
  verify->add_option("--epsilon", vf_eps,
                     "epsilon for the value margins (default: from query)");

  // bench
  auto* bench = app.add_subcommand("bench", "experiment pipeline")->fallthrough();
  bench->require_subcommand(1);
  auto* brun = bench->add_subcommand("run", "run the three-run grid")->fallthrough();
  bool br_full = false;
  double br_scale = 1.0, br_budget_ms = 0;
  brun->add_flag("--full-grid", br_full,
                 "full grid (very slow with the in-house solver)");
  brun->add_option("--scale", br_scale, "item-count scale");
  brun->add_option("--budget-ms", br_budget_ms,
                   "wall budget for the full exact run (method A)");
  auto* bagg = bench->add_subcommand("aggregate", "summarize a results CSV")->fallthrough();
  std::string ba_in;
  int ba_window = 501;
  bagg->add_option("csv", ba_in, "results CSV from bench run")->required();
  bagg->add_option("--window", ba_window, "rolling-median window");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (gen_grid) {
        if (out_path.empty())
          throw std::runtime_error("gen --grid needs --out directory");
        const GridSpec spec = gen_full ? GridSpec{} : desk_grid();
        const auto settings = expand_grid(spec, gen_scale, seed);
        int idx = 0;
        for (const auto& gp : settings) {
          const GenResult r = generate(gp);
          std::ostringstream name;
          name << out_path << "/grid-" << idx++ << ".json";
          save_instance(r.instance, name.str());
        }
        std::cout << "wrote " << settings.size() << " instances\n";
        return 0;
      }
      GenParams gp;
      gp.n = gen_n;
      gp.m = gen_m;
      gp.rho = gen_rho;
      gp.redundancy_target = gen_rt;
      gp.value_marginal = parse_marginal(gen_vm);
      gp.weight_marginal = parse_marginal(gen_wm);
      gp.seed = seed;
      const GenResult r = generate(gp);
      emit(instance_to_json(r.instance), out_path);
      if (r.clamped_items > 0)
        std::cerr << "note: clamped " << r.clamped_items << " items\n";
      return 0;
    }

    if (*solve) {
      const GapInstance inst = load_instance(solve_in);
      const Budget budget = make_budget(solve_budget_ms, solve_budget_nodes);
      nlohmann::json j;
      if (solve_method == "exact") {
        j = solve_result_json(gap_exact(inst, budget));
      } else if (solve_method == "lp") {
        const LpResult lp = gap_lp(inst);
        j["value"] = lp.value;
        j["status"] = "Optimal";
        j["fractional"] = lp.y;
      } else if (solve_method == "greedy") {
        if (inst.m() != 1)
          throw std::runtime_error("greedy method needs a single knapsack");
        std::vector<double> vs(inst.n()), ws(inst.n());
        for (int i = 0; i < inst.n(); ++i) {
          vs[i] = inst.value(i, 0);
          ws[i] = inst.weight(i, 0);
        }
        j["value"] = kp_fractional_greedy(vs, ws, inst.capacity(0));
        j["status"] = "Optimal";
      } else {
        throw std::runtime_error("unknown method " + solve_method);
      }
      emit(j.dump(2), out_path);
      return 0;
    }

    if (*spars) {
      const GapInstance inst = load_instance(sp_in);
      SparsifyParams params;
      params.epsilon = sp_eps;
      params.p = sp_p;
      params.seed = seed;
      params.oracle_trials = sp_trials;
      params.mode =
          sp_mode == "practical" ? SparsifyMode::Practical : SparsifyMode::Theory;
      if (sp_tau > 0) params.tau_override = sp_tau;
      if (sp_alpha > 0) params.alpha_override = sp_alpha;
      if (sp_k > 0) params.k_override = sp_k;
      if (sp_oracle == "per") {
        params.oracle_mode = OracleMode::PerKnapsack;
        params.oracle_m = sp_oracle_list;
      } else if (sp_oracle == "global") {
        params.oracle_mode = OracleMode::Global;
        params.oracle_global = sp_oracle_m;
      } else if (sp_oracle == "lp") {
        params = lp_driven_params(inst);
      } else if (sp_oracle == "sampled") {
        params.oracle_mode = OracleMode::Sampled;
      } else {
        throw std::runtime_error("unknown oracle " + sp_oracle);
      }
      const QueryResult q = inst.m() == 1 && sp_oracle != "lp"
                                ? sparsify_kp(inst, params)
                                : sparsify_gap(inst, params);
      emit(query_to_json(q).dump(2), out_path);
      for (const auto& w : q.warnings) std::cerr << "warning: " << w << '\n';
      return 0;
    }

    if (*eval) {
      const GapInstance inst = load_instance(ev_in);
      std::ifstream qf(ev_query);
      if (!qf) throw std::runtime_error("cannot open " + ev_query);
      const QueryResult q = query_from_json(nlohmann::json::parse(qf));
      const Budget budget = make_budget(ev_budget_ms, 0);
      const SparsifierEval e =
          eval_sparsifier(inst, q.q, ev_p, ev_trials, seed, budget);
      nlohmann::json j;
      j["ratio"] = e.ratio;
      j["ratio_stderr"] = e.ratio_stderr;
      j["numerator_mean"] = e.numerator_mean;
      j["numerator_stderr"] = e.numerator_stderr;
      j["denominator_mean"] = e.denominator_mean;
      j["denominator_stderr"] = e.denominator_stderr;
      j["completed"] = e.completed;
      j["budget_exceeded"] = e.budget_exceeded;
      emit(j.dump(2), out_path);
      return 0;
    }

    if (*verify) {
      const GapInstance inst = load_instance(vf_in);
      std::ifstream qf(vf_query);
      if (!qf) throw std::runtime_error("cannot open " + vf_query);
      const QueryResult q = query_from_json(nlohmann::json::parse(qf));
      const double eps = vf_eps > 0 ? vf_eps : q.epsilon;
      LemmaReport total;
      for (int t = 0; t < vf_trials; ++t) {
        const ActiveSet r = sample_active(inst.n(), vf_p, mix_key(seed, t));
        const auto sub = restrict(inst, r.included);
        const SolveResult opt_r = gap_exact(sub.instance);
        const Assignment opt = unrestrict(opt_r.assignment, sub.item_map);
        const ReconstructionTrace trace =
            reconstruct(inst, r.included, q, opt);
        const LemmaReport rep =
            verify_lemmas(inst, r.included, q, opt, trace, eps);
        merge(total, rep);
      }
      emit(report_to_json(total).dump(2), out_path);
      return 0;
    }

    if (*brun) {
      const GridSpec spec = br_full ? GridSpec{} : desk_grid();
      const auto settings = expand_grid(spec, br_scale, seed);
      const Budget budget = make_budget(br_budget_ms, 0);
      if (out_path.empty() || out_path == "-") {
        run_grid(settings, threads, budget, std::cout);
      } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open " + out_path);
        run_grid(settings, threads, budget, f);
      }
      return 0;
    }

    if (*bagg) {
      std::ifstream f(ba_in);
      if (!f) throw std::runtime_error("cannot open " + ba_in);
      const auto records = read_csv(f);
      const AggregateResult agg = aggregate(records, ba_window);
      const std::string prefix =
          out_path.empty() || out_path == "-" ? "aggregate" : out_path;
      write_aggregate(agg, prefix);
      std::cout << "rows=" << agg.overall.rows
                << " mean_approx_ratio=" << agg.overall.mean_approx_ratio
                << " mean_speedup=" << agg.overall.mean_speedup
                << " mean_etr=" << agg.overall.mean_etr << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
