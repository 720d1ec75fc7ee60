#include "sparsepack/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsepack/lp.hpp"
#include "sparsepack/rng.hpp"
#include "sparsepack/stochastic.hpp"

namespace sparsepack {

double tau(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("tau: epsilon must be in (0,1]");
  const double l = std::log(1.0 / epsilon);
  return 1.0 + l + std::sqrt(l * l + 2.0 * l);
}

int bucket_index(double v, double m_scale, double g, int K, bool allow_super) {
  if (v <= g * m_scale) return 0;
  const double kf = std::log(v / (g * m_scale)) / std::log1p(g);
  int k = static_cast<int>(std::ceil(kf - 1e-12));
  if (k < 1) k = 1;
  if (k > K) return allow_super ? K + 1 : K;
  return k;
}

std::pair<double, double> bucket_bounds(double m_scale, double g, int K,
                                        int k) {
  const double inf = std::numeric_limits<double>::infinity();
  auto edge = [&](int e) {
    return std::exp(std::log(g) + e * std::log1p(g) + std::log(m_scale));
  };
  if (k == 0) return {-inf, edge(0)};
  if (k > K) return {edge(K), inf};
  return {edge(k - 1), edge(k)};
}

namespace {

void check_common(const SparsifyParams& params) {
  if (!(params.epsilon > 0.0 && params.epsilon < 1.0))
    throw std::invalid_argument("sparsify: epsilon must be in (0,1)");
  if (!(params.p > 0.0 && params.p <= 1.0))
    throw std::invalid_argument("sparsify: p must be in (0,1]");
  if (params.tau_override && !(*params.tau_override > 0.0))
    throw std::invalid_argument("sparsify: tau override must be positive");
  if (params.k_override && *params.k_override < 1)
    throw std::invalid_argument("sparsify: K override must be positive");
  if (params.alpha_override && !(*params.alpha_override >= 1.0))
    throw std::invalid_argument("sparsify: alpha override must be >= 1");
}

// Per-knapsack scales M_j resolved from the oracle mode. Global mode
// splits a single estimate evenly; sampled mode Monte-Carlo estimates the
// per-knapsack optima of the deterministically tie-broken solver.
std::vector<double> resolve_scales(const GapInstance& inst,
                                   const SparsifyParams& params) {
  const int m = inst.m();
  std::vector<double> scales;
  switch (params.oracle_mode) {
    case OracleMode::PerKnapsack:
      if (static_cast<int>(params.oracle_m.size()) != m)
        throw std::invalid_argument("sparsify: oracle list length != m");
      scales = params.oracle_m;
      break;
    case OracleMode::Global:
      scales.assign(m, params.oracle_global / m);
      break;
    case OracleMode::LpDriven:
      scales.assign(m, gap_lp(inst).value);
      break;
    case OracleMode::Sampled: {
      if (params.oracle_trials < 1)
        throw std::invalid_argument("sparsify: oracle trials >= 1");
      scales.assign(m, 0.0);
      const int trials = params.p == 1.0 ? 1 : params.oracle_trials;
      for (int t = 0; t < trials; ++t) {
        const ActiveSet r =
            sample_active(inst.n(), params.p, mix_key(params.seed, t));
        const auto sub = restrict(inst, r.included);
        const SolveResult res = sub.instance.m() == 1
                                    ? kp_exact(sub.instance)
                                    : gap_exact(sub.instance);
        for (const auto& pr : res.assignment.pairs)
          scales[pr.second] += sub.instance.value(pr.first, pr.second);
      }
      for (double& s : scales) s /= trials;
      break;
    }
  }
  for (double s : scales)
    if (!(s > 0.0))
      throw std::invalid_argument("sparsify: oracle scale must be positive");
  return scales;
}

int resolve_rounds(const SparsifyParams& params) {
  if (params.alpha_override)
    return std::max(1, static_cast<int>(std::llround(*params.alpha_override)));
  const double alpha = 1.0 / params.epsilon;
  return std::max(1, static_cast<int>(std::ceil(alpha)) - 1);
}

}  // namespace

QueryResult sparsify_kp(const GapInstance& inst,
                        const SparsifyParams& params) {
  if (inst.m() != 1)
    throw std::invalid_argument("sparsify_kp: single-knapsack instances only");
  check_common(params);

  QueryResult out;
  out.epsilon = params.epsilon;
  out.p = params.p;
  out.gap_grid = false;
  if (params.mode == SparsifyMode::Theory &&
      !(params.epsilon < 1.0 / 3.0))
    out.warnings.push_back("epsilon outside the (0,1/3) analysis range");

  const double eps = params.epsilon;
  const double M = resolve_scales(inst, params)[0];
  out.m_values = {M};
  const int K = params.k_override
                    ? *params.k_override
                    : static_cast<int>(std::ceil(
                          (1.0 / eps) * std::log(1.0 / (eps * params.p))));
  out.num_buckets = std::max(K, 1);
  out.rounds = 1;
  out.tau_used = params.tau_override ? *params.tau_override : tau(eps);
  const double budget = out.tau_used * inst.capacity(0) / params.p;

  std::vector<std::vector<int>> bucket_items(out.num_buckets + 1);
  for (int i = 0; i < inst.n(); ++i)
    bucket_items[bucket_index(inst.value(i, 0), M, eps, out.num_buckets,
                              false)]
        .push_back(i);

  out.ledger.assign(1, 0.0);
  for (int k = 0; k <= out.num_buckets; ++k) {
    auto& items = bucket_items[k];
    if (items.empty()) continue;
    if (k == 0) {
      std::stable_sort(items.begin(), items.end(), [&](int a, int b) {
        return inst.value(a, 0) * inst.weight(b, 0) >
               inst.value(b, 0) * inst.weight(a, 0);
      });
    } else {
      std::stable_sort(items.begin(), items.end(), [&](int a, int b) {
        return inst.weight(a, 0) < inst.weight(b, 0);
      });
    }
    BucketSelection sel;
    sel.j = 0;
    sel.k = k;
    sel.t = 1;
    double w = 0.0;
    for (int i : items) {
      sel.items.push_back(i);
      w += inst.weight(i, 0);
      if (w >= budget) break;
    }
    for (int i : sel.items) {
      out.q.indices.push_back(i);
      out.ledger[0] += inst.weight(i, 0);
    }
    out.buckets.push_back(std::move(sel));
  }
  out.q.normalize();
  out.lp_degree_bound = std::max(1.0, out.ledger[0] / inst.capacity(0));
  out.integral_degree_bound = 2.0 * out.lp_degree_bound;
  return out;
}

QueryResult sparsify_gap(const GapInstance& inst,
                         const SparsifyParams& params) {
  check_common(params);

  QueryResult out;
  out.epsilon = params.epsilon;
  out.p = params.p;
  out.gap_grid = true;
  if (params.mode == SparsifyMode::Theory &&
      !(params.epsilon < 1.0 / 6.0))
    out.warnings.push_back("epsilon outside the (0,1/6) analysis range");

  const int n = inst.n();
  const int m = inst.m();
  const double eps = params.epsilon;
  const double g = eps * eps;
  out.m_values = resolve_scales(inst, params);
  const double k_arg =
      params.oracle_mode == OracleMode::Global ? m / (g * eps) : 1.0 / (g * eps);
  const int K = params.k_override
                    ? *params.k_override
                    : static_cast<int>(std::ceil((2.0 / g) * std::log(k_arg)));
  out.num_buckets = std::max(K, 1);
  out.rounds = resolve_rounds(params);
  out.tau_used = params.tau_override ? *params.tau_override : tau(g);

  // beta(i,j), or -1 for pairs that never fit their knapsack.
  std::vector<int> beta(static_cast<std::size_t>(n) * m, -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (inst.weight(i, j) <= inst.capacity(j))
        beta[static_cast<std::size_t>(i) * m + j] = bucket_index(
            inst.value(i, j), out.m_values[j], g, out.num_buckets, true);

  struct Pair {
    int i, j, k;
  };
  std::vector<Pair> high, low;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const int k = beta[static_cast<std::size_t>(i) * m + j];
      if (k > 0)
        high.push_back({i, j, k});
      else if (k == 0)
        low.push_back({i, j, 0});
    }
  // The while-loops always pick the globally best remaining valid pair,
  // and validity only shrinks within a round, so one pass over each
  // statically sorted list per round reproduces them exactly.
  std::stable_sort(high.begin(), high.end(), [&](const Pair& a, const Pair& b) {
    const double wa = inst.weight(a.i, a.j), wb = inst.weight(b.i, b.j);
    if (wa != wb) return wa < wb;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::stable_sort(low.begin(), low.end(), [&](const Pair& a, const Pair& b) {
    const double da = inst.value(a.i, a.j) * inst.weight(b.i, b.j);
    const double db = inst.value(b.i, b.j) * inst.weight(a.i, a.j);
    if (da != db) return da > db;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::vector<char> in_q(n, 0);
  out.ledger.assign(m, 0.0);
  std::vector<double> budgets(static_cast<std::size_t>(m) *
                              (out.num_buckets + 2));
  std::vector<std::vector<int>> sel(budgets.size());

  for (int t = 1; t <= out.rounds; ++t) {
    for (int j = 0; j < m; ++j) {
      const double b = out.tau_used * inst.capacity(j) / params.p;
      for (int k = 0; k <= out.num_buckets + 1; ++k)
        budgets[static_cast<std::size_t>(j) * (out.num_buckets + 2) + k] = b;
    }
    auto run_phase = [&](const std::vector<Pair>& list) {
      for (const Pair& pr : list) {
        if (in_q[pr.i]) continue;
        double& b =
            budgets[static_cast<std::size_t>(pr.j) * (out.num_buckets + 2) +
                    pr.k];
        if (!(b > 0.0)) continue;
        const double w = inst.weight(pr.i, pr.j);
        in_q[pr.i] = 1;
        b -= w;
        out.ledger[pr.j] += w;
        sel[static_cast<std::size_t>(pr.j) * (out.num_buckets + 2) + pr.k]
            .push_back(pr.i);
      }
    };
    run_phase(high);
    run_phase(low);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k <= out.num_buckets + 1; ++k) {
        auto& s = sel[static_cast<std::size_t>(j) * (out.num_buckets + 2) + k];
        if (s.empty()) continue;
        BucketSelection bs;
        bs.j = j;
        bs.k = k;
        bs.t = t;
        bs.items = std::move(s);
        s.clear();
        out.buckets.push_back(std::move(bs));
      }
  }

  for (int i = 0; i < n; ++i)
    if (in_q[i]) out.q.indices.push_back(i);
  double worst = 1.0;
  for (int j = 0; j < m; ++j)
    worst = std::max(worst, out.ledger[j] / inst.capacity(j));
  out.lp_degree_bound = worst;
  out.integral_degree_bound = 2.0 * worst;
  return out;
}

SparsifyParams lp_driven_params(const GapInstance& inst) {
  SparsifyParams p;
  p.epsilon = 0.2;
  p.p = 1.0;
  p.mode = SparsifyMode::Practical;
  p.oracle_mode = OracleMode::PerKnapsack;
  p.oracle_m.assign(inst.m(), gap_lp(inst).value);
  p.tau_override = 1.0;
  p.alpha_override = 1.0;
  const double e2 = p.epsilon * p.epsilon;
  p.k_override = static_cast<int>(std::ceil((1.0 / e2) * std::log(1.0 / e2)));
  return p;
}

nlohmann::json query_to_json(const QueryResult& q) {
  nlohmann::json j;
  j["query"] = q.q.indices;
  j["ledger"] = q.ledger;
  j["lp_degree_bound"] = q.lp_degree_bound;
  j["integral_degree_bound"] = q.integral_degree_bound;
  j["m_values"] = q.m_values;
  j["num_buckets"] = q.num_buckets;
  j["rounds"] = q.rounds;
  j["epsilon"] = q.epsilon;
  j["p"] = q.p;
  j["tau"] = q.tau_used;
  j["gap_grid"] = q.gap_grid;
  if (!q.warnings.empty()) j["warnings"] = q.warnings;
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& b : q.buckets)
    buckets.push_back({{"j", b.j}, {"k", b.k}, {"t", b.t}, {"items", b.items}});
  j["buckets"] = std::move(buckets);
  return j;
}

QueryResult query_from_json(const nlohmann::json& j) {
  QueryResult q;
  q.q.indices = j.at("query").get<std::vector<int>>();
  q.q.normalize();
  q.ledger = j.at("ledger").get<std::vector<double>>();
  q.lp_degree_bound = j.at("lp_degree_bound").get<double>();
  q.integral_degree_bound = j.at("integral_degree_bound").get<double>();
  q.m_values = j.at("m_values").get<std::vector<double>>();
  q.num_buckets = j.at("num_buckets").get<int>();
  q.rounds = j.at("rounds").get<int>();
  q.epsilon = j.at("epsilon").get<double>();
  q.p = j.at("p").get<double>();
  q.tau_used = j.at("tau").get<double>();
  q.gap_grid = j.value("gap_grid", true);
  if (j.contains("warnings"))
    q.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& b : j.at("buckets")) {
    BucketSelection bs;
    bs.j = b.at("j").get<int>();
    bs.k = b.at("k").get<int>();
    bs.t = b.at("t").get<int>();
    bs.items = b.at("items").get<std::vector<int>>();
    q.buckets.push_back(std::move(bs));
  }
  return q;
}

}  // namespace sparsepack
