#include "sparsepack/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparsepack/lp.hpp"
#include "sparsepack/rng.hpp"
#include "sparsepack/stats.hpp"
#include "sparsepack/stochastic.hpp"

namespace sparsepack {

namespace {

constexpr double kTol = 1e-9;

using Clock = std::chrono::steady_clock;

struct BudgetTracker {
  explicit BudgetTracker(const Budget& b)
      : budget(b), start(Clock::now()), exhausted(false) {}

  const Budget& budget;
  Clock::time_point start;
  std::uint64_t nodes = 0;
  bool exhausted;

  // Wall clock checked every 1024 nodes; node bound checked every call.
  bool tick() {
    if (exhausted) return false;
    ++nodes;
    if (budget.max_nodes && nodes > *budget.max_nodes) {
      exhausted = true;
      return false;
    }
    if (budget.max_wall_time_s && (nodes & 1023u) == 0) {
      if (elapsed_s() > *budget.max_wall_time_s) {
        exhausted = true;
        return false;
      }
    }
    return true;
  }

  double elapsed_s() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

bool all_integral(const std::vector<double>& ws) {
  for (double w : ws)
    if (std::abs(w - std::round(w)) > 1e-9) return false;
  return true;
}

// ---------------------------------------------------------------------
// Knapsack

struct KpOrder {
  std::vector<int> order;  // item ids by decreasing density, index tiebreak
};

KpOrder density_order(const std::vector<double>& values,
                      const std::vector<double>& weights) {
  KpOrder o;
  o.order.resize(values.size());
  std::iota(o.order.begin(), o.order.end(), 0);
  std::stable_sort(o.order.begin(), o.order.end(), [&](int a, int b) {
    return values[a] * weights[b] > values[b] * weights[a];
  });
  return o;
}

SolveResult kp_dp(const std::vector<double>& values,
                  const std::vector<double>& weights, double capacity) {
  const int n = static_cast<int>(values.size());
  const int cap = static_cast<int>(std::floor(capacity + 1e-9));
  std::vector<double> dp(cap + 1, 0.0);
  std::vector<std::vector<bool>> take(n, std::vector<bool>(cap + 1, false));
  for (int i = 0; i < n; ++i) {
    const int w = static_cast<int>(std::llround(weights[i]));
    if (w > cap) continue;
    for (int c = cap; c >= w; --c) {
      const double cand = dp[c - w] + values[i];
      if (cand > dp[c] + kTol) {
        dp[c] = cand;
        take[i][c] = true;
      }
    }
  }
  SolveResult res;
  res.value = dp[cap];
  int c = cap;
  for (int i = n - 1; i >= 0; --i) {
    if (take[i][c]) {
      res.assignment.add(i, 0);
      c -= static_cast<int>(std::llround(weights[i]));
    }
  }
  res.assignment.normalize();
  // Recompute value in canonical item order for reproducible summation.
  res.value = 0.0;
  for (auto [i, j] : res.assignment.pairs) res.value += values[i];
  return res;
}

struct KpBnb {
  const std::vector<double>& values;
  const std::vector<double>& weights;
  double capacity;
  std::vector<int> order;
  BudgetTracker tracker;

  double best_value = 0.0;
  std::vector<int> best_set;
  std::vector<int> current;

  KpBnb(const std::vector<double>& v, const std::vector<double>& w, double c,
        const Budget& b)
      : values(v), weights(w), capacity(c), tracker(b) {
    order = density_order(v, w).order;
  }

  double greedy_bound(std::size_t pos, double resid) const {
    double bound = 0.0;
    for (std::size_t k = pos; k < order.size() && resid > 0.0; ++k) {
      const int i = order[k];
      if (weights[i] <= resid) {
        bound += values[i];
        resid -= weights[i];
      } else {
        bound += values[i] * (resid / weights[i]);
        break;
      }
    }
    return bound;
  }

  void dfs(std::size_t pos, double value, double resid) {
    if (!tracker.tick()) return;
    if (value > best_value + kTol) {
      best_value = value;
      best_set = current;
    }
    if (pos >= order.size()) return;
    if (value + greedy_bound(pos, resid) <= best_value + kTol) return;
    const int i = order[pos];
    if (weights[i] <= resid) {
      current.push_back(i);
      dfs(pos + 1, value + values[i], resid - weights[i]);
      current.pop_back();
    }
    dfs(pos + 1, value, resid);
  }
};

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::BudgetExceeded:
      return "budget_exceeded";
    case SolveStatus::InfeasibleEmpty:
      return "infeasible_empty";
  }
  return "optimal";
}

SolveResult kp_exact(const std::vector<double>& values,
                     const std::vector<double>& weights, double capacity,
                     const Budget& budget) {
  if (values.size() != weights.size())
    throw std::invalid_argument("kp: value/weight size mismatch");
  const auto t0 = Clock::now();
  SolveResult res;
  if (values.empty()) {
    res.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
  }

  // DP path for integral weights at moderate table sizes.
  const double cap_floor = std::floor(capacity + 1e-9);
  const double table_bytes = values.size() * (cap_floor + 1.0) / 8.0;
  if (all_integral(weights) && cap_floor <= 1e6 && table_bytes <= 256e6) {
    res = kp_dp(values, weights, capacity);
    res.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
  }

  KpBnb bnb(values, weights, capacity, budget);
  bnb.dfs(0, 0.0, capacity);
  res.value = 0.0;
  std::sort(bnb.best_set.begin(), bnb.best_set.end());
  for (int i : bnb.best_set) {
    res.assignment.add(i, 0);
    res.value += values[i];
  }
  res.nodes = bnb.tracker.nodes;
  res.status = bnb.tracker.exhausted ? SolveStatus::BudgetExceeded
                                     : SolveStatus::Optimal;
  res.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

SolveResult kp_exact(const GapInstance& inst, const Budget& budget) {
  if (inst.m() != 1) throw std::invalid_argument("kp_exact requires m == 1");
  std::vector<double> values(inst.n()), weights(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    values[i] = inst.value(i, 0);
    weights[i] = inst.weight(i, 0);
  }
  return kp_exact(values, weights, inst.capacity(0), budget);
}

double kp_fractional_greedy(const std::vector<double>& values,
                            const std::vector<double>& weights,
                            double capacity) {
  if (values.size() != weights.size())
    throw std::invalid_argument("kp: value/weight size mismatch");
  const auto order = density_order(values, weights).order;
  double resid = capacity;
  double total = 0.0;
  for (int i : order) {
    if (resid <= 0.0) break;
    if (weights[i] <= resid) {
      total += values[i];
      resid -= weights[i];
    } else {
      total += values[i] * (resid / weights[i]);
      break;
    }
  }
  return total;
}

// ---------------------------------------------------------------------
// GAP branch and bound.

namespace {

struct GapBnb {
  const GapInstance& inst;
  BudgetTracker tracker;
  int n, m;

  // Per knapsack: pair list sorted by decreasing density (v_ij / w_ij).
  std::vector<std::vector<int>> bin_order;  // item ids, per knapsack
  std::vector<int> assigned;                // -1 free/skip marker per item
  std::vector<double> resid;

  double best_value = -1.0;
  std::vector<int> best_assigned;
  bool found_leaf = false;

  GapBnb(const GapInstance& g, const Budget& b)
      : inst(g), tracker(b), n(g.n()), m(g.m()) {
    assigned.assign(n, -2);  // -2 = undecided, -1 = skipped
    resid = g.capacities();
    bin_order.resize(m);
    for (int j = 0; j < m; ++j) {
      auto& ord = bin_order[j];
      for (int i = 0; i < n; ++i)
        if (g.weight(i, j) <= g.capacity(j)) ord.push_back(i);
      std::stable_sort(ord.begin(), ord.end(), [&](int a, int bb) {
        return g.value(a, j) * g.weight(bb, j) >
               g.value(bb, j) * g.weight(a, j);
      });
    }
  }

  // Sum over knapsacks of the fractional knapsack bound on undecided
  // items; items may be counted once per knapsack, so this dominates the
  // LP relaxation of the residual problem.
  double bound(int next_item) const {
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
      double cap = resid[j];
      if (cap <= 0.0) continue;
      double acc = 0.0;
      for (int i : bin_order[j]) {
        if (i < next_item || assigned[i] != -2) continue;
        const double w = inst.weight(i, j);
        if (w <= cap) {
          acc += inst.value(i, j);
          cap -= w;
          if (cap <= 0.0) break;
        } else {
          acc += inst.value(i, j) * (cap / w);
          break;
        }
      }
      total += acc;
    }
    return total;
  }

  Assignment heur_assignment;
  double heur_value = 0.0;

  // Greedy warm start: highest best-pair density first.
  double heuristic() {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> key(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double best = 0.0;
      for (int j = 0; j < m; ++j)
        if (inst.weight(i, j) <= inst.capacity(j))
          best = std::max(best, inst.value(i, j) / inst.weight(i, j));
      key[i] = best;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return key[a] > key[b]; });
    std::vector<double> cap = inst.capacities();
    double value = 0.0;
    for (int i : order) {
      int pick = -1;
      double picked = -1.0;
      for (int j = 0; j < m; ++j) {
        if (inst.weight(i, j) <= cap[j] && inst.value(i, j) > picked) {
          picked = inst.value(i, j);
          pick = j;
        }
      }
      if (pick >= 0) {
        cap[pick] -= inst.weight(i, pick);
        value += picked;
        heur_assignment.add(i, pick);
      }
    }
    heur_assignment.normalize();
    heur_value = value;
    return value;
  }

  bool prune(double ub) const {
    if (found_leaf) return ub <= best_value + kTol;
    return ub < best_value - kTol;
  }

  void dfs(int item, double value) {
    if (!tracker.tick()) return;
    if (item == n) {
      if (value > best_value + kTol || (!found_leaf && value >= best_value - kTol)) {
        best_value = std::max(best_value, value);
        best_assigned = assigned;
        found_leaf = true;
      }
      return;
    }
    if (prune(value + bound(item))) return;
    // Knapsacks in ascending index, then skip: DFS leaves appear in
    // lexicographic order of the assignment vector (unassigned last), so
    // the first optimum found is the canonical one.
    for (int j = 0; j < m; ++j) {
      const double w = inst.weight(item, j);
      if (w <= resid[j]) {
        assigned[item] = j;
        // Restore the saved value rather than adding w back: the
        // subtract/add round trip can drift an ulp and unfit exact-fit
        // (weight == capacity) items on later sibling branches.
        const double saved = resid[j];
        resid[j] -= w;
        dfs(item + 1, value + inst.value(item, j));
        resid[j] = saved;
        assigned[item] = -2;
        if (tracker.exhausted) return;
      }
    }
    assigned[item] = -1;
    dfs(item + 1, value);
    assigned[item] = -2;
  }
};

}  // namespace

SolveResult gap_exact(const GapInstance& inst, const Budget& budget) {
  const auto t0 = Clock::now();
  SolveResult res;
  if (inst.n() == 0) {
    res.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
  }

  GapBnb bnb(inst, budget);
  // Warm-start value bound (no assignment recorded: the canonical optimum
  // must still be the first leaf reached at that value).
  bnb.best_value = bnb.heuristic() - 1e-7;
  bnb.dfs(0, 0.0);

  res.value = 0.0;
  if (bnb.found_leaf) {
    for (int i = 0; i < inst.n(); ++i) {
      const int j = bnb.best_assigned[i];
      if (j >= 0) {
        res.assignment.add(i, j);
        res.value += inst.value(i, j);
      }
    }
  }
  res.nodes = bnb.tracker.nodes;
  res.status = bnb.tracker.exhausted ? SolveStatus::BudgetExceeded
                                     : SolveStatus::Optimal;
  if (res.status == SolveStatus::BudgetExceeded &&
      bnb.heur_value > res.value) {
    // Best incumbent so far is still the warm start.
    res.assignment = bnb.heur_assignment;
    res.value = assignment_value(inst, res.assignment);
  }
  res.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

ExpectedOpt expected_opt(const GapInstance& inst, double p, int trials,
                         std::uint64_t seed, const Budget& budget) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("expected_opt requires p in (0,1]");
  if (trials < 1) throw std::invalid_argument("expected_opt: trials >= 1");

  ExpectedOpt out;
  if (p == 1.0) {
    const SolveResult r = inst.m() == 1 ? kp_exact(inst, budget)
                                        : gap_exact(inst, budget);
    out.mean = r.value;
    out.stderr_ = 0.0;
    out.completed = 1;
    if (r.status == SolveStatus::BudgetExceeded) out.budget_exceeded = 1;
    return out;
  }

  std::vector<double> samples;
  samples.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    const ActiveSet r = sample_active(inst.n(), p, mix_key(seed, t));
    const auto sub = restrict(inst, r.included);
    const SolveResult sr = sub.instance.m() == 1
                               ? kp_exact(sub.instance, budget)
                               : gap_exact(sub.instance, budget);
    if (sr.status == SolveStatus::BudgetExceeded) {
      ++out.budget_exceeded;
      continue;
    }
    samples.push_back(sr.value);
  }
  const MeanStderr ms = mean_stderr(samples);
  out.mean = ms.mean;
  out.stderr_ = ms.stderr_;
  out.completed = static_cast<int>(samples.size());
  return out;
}

}  // namespace sparsepack
