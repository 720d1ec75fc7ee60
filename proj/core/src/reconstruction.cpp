#include "sparsepack/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sparsepack {

namespace {

constexpr double kSlack = 1e-9;

struct Prep {
  int n = 0, m = 0, K = 0;
  double grid = 0.0;  // eps for the knapsack grid, eps^2 for GAP
  std::vector<char> active;
  std::vector<int> opt_knap;    // -1 when unassigned
  std::vector<double> opt_val;  // v_i^OPT
  // Active items per (j,k,t), in selection order; rounds ascending.
  std::vector<std::vector<std::pair<int, std::vector<int>>>> rounds;
  std::vector<std::vector<int>> bar_union;  // active items per (j,k)
};

std::size_t slot(const Prep& p, int j, int k) {
  return static_cast<std::size_t>(j) * (p.K + 2) + k;
}

Prep prepare(const GapInstance& inst, const ItemSet& active,
             const QueryResult& query, const Assignment& opt) {
  Prep p;
  p.n = inst.n();
  p.m = inst.m();
  p.K = query.num_buckets;
  p.grid = query.gap_grid ? query.epsilon * query.epsilon : query.epsilon;
  if (static_cast<int>(query.m_values.size()) != p.m)
    throw std::invalid_argument("reconstruct: query trace does not match m");

  p.active.assign(p.n, 0);
  for (int i : active.indices) {
    inst.check_item(i);
    p.active[i] = 1;
  }
  p.opt_knap.assign(p.n, -1);
  p.opt_val.assign(p.n, 0.0);
  for (const auto& pr : opt.pairs) {
    inst.check_item(pr.first);
    inst.check_knapsack(pr.second);
    if (!p.active[pr.first])
      throw std::invalid_argument("reconstruct: optimum uses inactive item");
    p.opt_knap[pr.first] = pr.second;
    p.opt_val[pr.first] = inst.value(pr.first, pr.second);
  }

  const std::size_t slots = static_cast<std::size_t>(p.m) * (p.K + 2);
  p.rounds.assign(slots, {});
  p.bar_union.assign(slots, {});
  for (const auto& b : query.buckets) {
    if (b.j < 0 || b.j >= p.m || b.k < 0 || b.k > p.K + 1)
      throw std::invalid_argument("reconstruct: bucket trace out of range");
    std::vector<int> act_items;
    for (int i : b.items)
      if (p.active[i]) act_items.push_back(i);
    auto& per = p.rounds[slot(p, b.j, b.k)];
    per.emplace_back(b.t, act_items);
    auto& u = p.bar_union[slot(p, b.j, b.k)];
    u.insert(u.end(), act_items.begin(), act_items.end());
  }
  for (auto& per : p.rounds)
    std::sort(per.begin(), per.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  return p;
}

}  // namespace

OptPartition partition_opt(const GapInstance& inst, const ItemSet& active,
                           const QueryResult& query, const Assignment& opt) {
  const Prep p = prepare(inst, active, query, opt);
  OptPartition part;
  part.num_buckets = p.K;
  const std::size_t slots = static_cast<std::size_t>(p.m) * (p.K + 2);
  part.queried.assign(slots, {});
  part.missed.assign(slots, {});

  // Querying bucket of each queried item; the bucket selections are
  // pairwise disjoint over items.
  std::vector<std::size_t> home(p.n, slots);
  for (std::size_t s = 0; s < slots; ++s)
    for (int i : p.bar_union[s]) {
      if (home[i] != slots)
        throw std::invalid_argument(
            "partition_opt: bucket lists are not disjoint");
      home[i] = s;
    }

  for (int i = 0; i < p.n; ++i) {
    const int j = p.opt_knap[i];
    if (j < 0) continue;
    if (home[i] != slots) {
      part.queried[home[i]].push_back(i);
    } else {
      const int k = bucket_index(inst.value(i, j), query.m_values[j], p.grid,
                                 p.K, query.gap_grid);
      part.missed[slot(p, j, k)].push_back(i);
    }
  }
  for (auto& v : part.queried) std::sort(v.begin(), v.end());
  for (auto& v : part.missed) std::sort(v.begin(), v.end());
  return part;
}

std::string to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::DirectSub: return "DirectSub";
    case CaseLabel::ValueRejection: return "ValueRejection";
    case CaseLabel::ValueSubstitution: return "ValueSubstitution";
    case CaseLabel::ExactSub: return "ExactSub";
    case CaseLabel::DensitySub1: return "DensitySub-1";
    case CaseLabel::DensitySub2: return "DensitySub-2";
    case CaseLabel::SuperQueried: return "SuperQueried";
    case CaseLabel::SuperMissed: return "SuperMissed";
  }
  return "?";
}

namespace {

struct Builder {
  const GapInstance& inst;
  const Prep& p;
  ReconstructionTrace& trace;
  std::vector<char> in_alg;
  std::vector<char> in_opt_bar;

  Builder(const GapInstance& gi, const Prep& prep, ReconstructionTrace& tr)
      : inst(gi), p(prep), trace(tr), in_alg(prep.n, 0),
        in_opt_bar(prep.n, 0) {}

  CallRecord begin(Subroutine s, int j, int k, CaseLabel label) {
    CallRecord r;
    r.subroutine = s;
    r.j = j;
    r.k = k;
    r.label = label;
    r.delta_w_alg.assign(p.m, 0.0);
    r.delta_w_opt.assign(p.m, 0.0);
    return r;
  }
  void add_alg(CallRecord& r, int i, int j) {
    trace.final_alg.add(i, j);
    in_alg[i] = 1;
    r.delta_w_alg[j] += inst.weight(i, j);
    r.delta_v_alg += inst.value(i, j);
  }
  void add_opt_bar(CallRecord& r, int i, int j) {
    trace.final_opt_bar.add(i, j);
    in_opt_bar[i] = 1;
    r.delta_w_opt[j] += inst.weight(i, j);
    r.delta_v_opt += inst.value(i, j);
  }
};

void fill_large(Builder& b, int j, int k, std::vector<int> queried,
                std::vector<int> missed) {
  const Prep& p = b.p;
  std::vector<char> is_queried(p.n, 0);
  for (int i : queried) is_queried[i] = 1;

  for (int i : missed) {
    // Cheapest queried substitute used by neither solution.
    int direct = -1;
    for (int c : p.bar_union[slot(p, j, k)]) {
      if (p.opt_knap[c] >= 0 || b.in_alg[c]) continue;
      if (direct < 0 ||
          b.inst.weight(c, j) < b.inst.weight(direct, j) ||
          (b.inst.weight(c, j) == b.inst.weight(direct, j) && c < direct))
        direct = c;
    }
    if (direct >= 0) {
      CallRecord r = b.begin(Subroutine::FillLarge, j, k,
                             CaseLabel::DirectSub);
      b.add_opt_bar(r, i, j);
      b.add_alg(r, direct, j);
      b.trace.calls.push_back(std::move(r));
      continue;
    }
    // Redistribution: one queried optimum item per round, the least
    // valuable of which is either kept in place or moved onto knapsack j.
    std::vector<int> bundle;
    for (const auto& [t, items] : p.rounds[slot(p, j, k)]) {
      (void)t;
      int pick = -1;
      for (int c : items)
        if (is_queried[c] && !b.in_alg[c] && (pick < 0 || c < pick)) pick = c;
      if (pick >= 0) bundle.push_back(pick);
    }
    CaseLabel label = CaseLabel::ValueRejection;
    int sub = -1;
    if (!bundle.empty()) {
      int star = bundle[0];
      for (int c : bundle)
        if (p.opt_val[c] < p.opt_val[star]) star = c;
      if (p.opt_val[star] < p.opt_val[i]) {
        label = CaseLabel::ValueSubstitution;
        sub = star;
      }
    }
    CallRecord r = b.begin(Subroutine::FillLarge, j, k, label);
    for (int c : bundle) {
      if (c == sub)
        b.add_alg(r, c, j);
      else
        b.add_alg(r, c, p.opt_knap[c]);
      b.add_opt_bar(r, c, p.opt_knap[c]);
      is_queried[c] = 0;
    }
    b.add_opt_bar(r, i, j);
    b.trace.calls.push_back(std::move(r));
  }

  std::vector<int> rest;
  for (int i : queried)
    if (is_queried[i]) rest.push_back(i);
  if (!rest.empty()) {
    CallRecord r = b.begin(Subroutine::FillLarge, j, k, CaseLabel::ExactSub);
    for (int i : rest) {
      b.add_opt_bar(r, i, p.opt_knap[i]);
      b.add_alg(r, i, p.opt_knap[i]);
    }
    b.trace.calls.push_back(std::move(r));
  }
}

void fill_small(Builder& b, int j, const std::vector<int>& queried,
                const std::vector<int>& missed) {
  const Prep& p = b.p;
  if (missed.empty()) {
    if (queried.empty()) return;
    CallRecord r = b.begin(Subroutine::FillSmall, j, 0, CaseLabel::ExactSub);
    for (int i : queried) {
      b.add_opt_bar(r, i, p.opt_knap[i]);
      b.add_alg(r, i, p.opt_knap[i]);
    }
    b.trace.calls.push_back(std::move(r));
    return;
  }

  std::vector<int> bar = p.bar_union[slot(p, j, 0)];
  std::stable_sort(bar.begin(), bar.end(), [&](int a, int c) {
    const double ra = p.opt_val[a] * b.inst.weight(c, j);
    const double rc = p.opt_val[c] * b.inst.weight(a, j);
    if (ra != rc) return ra < rc;
    return a < c;
  });
  double missed_weight = 0.0;
  for (int i : missed) missed_weight += b.inst.weight(i, j);

  // Longest prefix whose members all gain value on knapsack j and whose
  // total weight stays within the missed weight.
  std::vector<char> in_s(p.n, 0);
  std::size_t prefix = 0;
  double s_weight = 0.0;
  for (; prefix < bar.size(); ++prefix) {
    const int i = bar[prefix];
    if (!(b.inst.value(i, j) > p.opt_val[i])) break;
    if (s_weight + b.inst.weight(i, j) > missed_weight) break;
    s_weight += b.inst.weight(i, j);
    in_s[i] = 1;
  }

  CallRecord r = b.begin(Subroutine::FillSmall, j, 0,
                         prefix > 0 ? CaseLabel::DensitySub1
                                    : CaseLabel::DensitySub2);
  r.has_prefix_ratios = true;
  r.prefix_max_ratio = 0.0;
  r.suffix_min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < bar.size(); ++x) {
    const double ratio = p.opt_val[bar[x]] / b.inst.weight(bar[x], j);
    if (x < prefix)
      r.prefix_max_ratio = std::max(r.prefix_max_ratio, ratio);
    else
      r.suffix_min_ratio = std::min(r.suffix_min_ratio, ratio);
  }

  for (int i : queried) {
    b.add_opt_bar(r, i, p.opt_knap[i]);
    if (in_s[i]) {
      b.add_alg(r, i, j);
      in_s[i] = 0;
    } else {
      b.add_alg(r, i, p.opt_knap[i]);
    }
  }
  for (std::size_t x = 0; x < prefix; ++x)
    if (in_s[bar[x]]) b.add_alg(r, bar[x], j);
  for (int i : missed) b.add_opt_bar(r, i, j);
  b.trace.calls.push_back(std::move(r));
}

void fill_super(Builder& b, int j, const std::vector<int>& queried,
                const std::vector<int>& missed) {
  const Prep& p = b.p;
  if (!queried.empty()) {
    CallRecord r =
        b.begin(Subroutine::FillSuper, j, p.K + 1, CaseLabel::SuperQueried);
    for (int i : queried) {
      b.add_opt_bar(r, i, p.opt_knap[i]);
      b.add_alg(r, i, p.opt_knap[i]);
    }
    b.trace.calls.push_back(std::move(r));
  }
  if (!missed.empty()) {
    CallRecord r =
        b.begin(Subroutine::FillSuper, j, p.K + 1, CaseLabel::SuperMissed);
    for (int i : missed) b.add_opt_bar(r, i, j);
    b.trace.calls.push_back(std::move(r));
  }
}

}  // namespace

ReconstructionTrace reconstruct(const GapInstance& inst,
                                const ItemSet& active,
                                const QueryResult& query,
                                const Assignment& opt) {
  const Prep p = prepare(inst, active, query, opt);
  const OptPartition part = partition_opt(inst, active, query, opt);

  ReconstructionTrace trace;
  for (const auto& bsel : query.buckets) {
    BucketEvent e;
    e.j = bsel.j;
    e.k = bsel.k;
    e.t = bsel.t;
    for (int i : bsel.items)
      if (p.active[i]) e.active_weight += inst.weight(i, bsel.j);
    e.excess = e.active_weight >= inst.capacity(bsel.j);
    trace.events.push_back(e);
  }

  Builder b(inst, p, trace);
  for (int j = 0; j < p.m; ++j) {
    fill_small(b, j, part.queried[slot(p, j, 0)], part.missed[slot(p, j, 0)]);
    for (int k = 1; k <= p.K; ++k) {
      const auto& q = part.queried[slot(p, j, k)];
      const auto& mi = part.missed[slot(p, j, k)];
      if (q.empty() && mi.empty()) continue;
      fill_large(b, j, k, q, mi);
    }
  }
  if (query.gap_grid)
    for (int j = 0; j < p.m; ++j)
      fill_super(b, j, part.queried[slot(p, j, p.K + 1)],
                 part.missed[slot(p, j, p.K + 1)]);

  trace.final_alg.normalize();
  trace.final_opt_bar.normalize();
  return trace;
}

LemmaReport verify_lemmas(const GapInstance& inst, const ItemSet& active,
                          const QueryResult& query, const Assignment& opt,
                          const ReconstructionTrace& trace, double epsilon) {
  LemmaReport rep;
  rep.realizations = 1;
  auto flag = [&](long& counter, const std::string& what) {
    ++counter;
    if (rep.violations.size() < 100) rep.violations.push_back(what);
  };

  const int m = inst.m();
  double large_alg = 0.0, large_opt = 0.0;
  double small_alg = 0.0, small_opt = 0.0, small_allowance = 0.0;
  double super_alg = 0.0, super_opt = 0.0;

  for (const auto& c : trace.calls) {
    ++rep.calls;
    for (int j = 0; j < m; ++j)
      if (c.delta_w_alg[j] > c.delta_w_opt[j] + kSlack)
        flag(rep.weight_domination_violations,
             "weight domination failed at (" + std::to_string(c.j) + "," +
                 std::to_string(c.k) + ") label " + to_string(c.label));
    if (c.has_prefix_ratios &&
        c.prefix_max_ratio > c.suffix_min_ratio + kSlack)
      flag(rep.ratio_ordering_violations,
           "prefix ratio ordering failed at knapsack " + std::to_string(c.j));
    switch (c.subroutine) {
      case Subroutine::FillLarge:
        large_alg += c.delta_v_alg;
        large_opt += c.delta_v_opt;
        break;
      case Subroutine::FillSmall:
        small_alg += c.delta_v_alg;
        small_opt += c.delta_v_opt;
        small_allowance += epsilon * epsilon * query.m_values[c.j];
        break;
      case Subroutine::FillSuper:
        super_alg += c.delta_v_alg;
        super_opt += c.delta_v_opt;
        break;
    }
  }
  rep.large_margin_sum = large_alg - (1.0 - 2.0 * epsilon) * large_opt;
  rep.large_margin_sq = rep.large_margin_sum * rep.large_margin_sum;
  rep.small_margin_sum =
      small_alg - (1.0 - 2.0 * epsilon) * small_opt + small_allowance;
  rep.small_margin_sq = rep.small_margin_sum * rep.small_margin_sum;
  const double opt_value = assignment_value(inst, opt);
  rep.super_margin_sum = 3.0 * epsilon * opt_value - (super_opt - super_alg);
  rep.super_margin_sq = rep.super_margin_sum * rep.super_margin_sum;

  // ALG: unique items, all active and queried, capacity dominated by OPT.
  std::vector<char> act(inst.n(), 0), in_q(inst.n(), 0);
  for (int i : active.indices) act[i] = 1;
  for (int i : query.q.indices) in_q[i] = 1;
  std::vector<char> seen(inst.n(), 0);
  for (const auto& pr : trace.final_alg.pairs) {
    if (seen[pr.first])
      flag(rep.uniqueness_violations,
           "item " + std::to_string(pr.first) + " assigned twice");
    seen[pr.first] = 1;
    if (!act[pr.first] || !in_q[pr.first])
      flag(rep.alg_outside_query_violations,
           "item " + std::to_string(pr.first) + " outside the active query");
  }
  for (int j = 0; j < m; ++j) {
    const double alg_w = knapsack_load(inst, trace.final_alg, j);
    const double opt_w = knapsack_load(inst, opt, j);
    if (alg_w > opt_w + kSlack)
      flag(rep.weight_domination_violations,
           "total weight of knapsack " + std::to_string(j) + " exceeds OPT");
  }

  // Benchmark identity: OPT-bar reproduces the canonical optimum.
  Assignment opt_sorted = opt;
  opt_sorted.normalize();
  if (!(trace.final_opt_bar == opt_sorted))
    flag(rep.optbar_mismatches, "rebuilt optimum differs from OPT");

  // Conditional bucket properties under the excess-weight events.
  const OptPartition part = partition_opt(inst, active, query, opt);
  const Prep p = prepare(inst, active, query, opt);
  for (const auto& e : trace.events) {
    const auto& missed = part.missed[slot(p, e.j, e.k)];
    if (missed.empty() || !e.excess || e.k == 0 || e.k > p.K) continue;
    // Active queried items of this (j,k,t).
    std::vector<int> items;
    for (const auto& [t, lst] : p.rounds[slot(p, e.j, e.k)])
      if (t == e.t) items = lst;
    if (static_cast<long>(items.size()) < static_cast<long>(missed.size()))
      flag(rep.conditional_property_violations,
           "queried bucket smaller than missed set at (" +
               std::to_string(e.j) + "," + std::to_string(e.k) + ")");
    double max_q = 0.0;
    for (int i : items) max_q = std::max(max_q, inst.weight(i, e.j));
    for (int i : missed)
      if (inst.weight(i, e.j) + kSlack < max_q)
        flag(rep.conditional_property_violations,
             "queried item heavier than a missed item at (" +
                 std::to_string(e.j) + "," + std::to_string(e.k) + ")");
  }
  for (int j = 0; j < m; ++j) {
    const auto& missed = part.missed[slot(p, j, 0)];
    if (missed.empty()) continue;
    double min_q_density = std::numeric_limits<double>::infinity();
    bool any_event = false;
    for (const auto& e : trace.events)
      if (e.j == j && e.k == 0 && e.excess) any_event = true;
    if (!any_event) continue;
    for (int i : p.bar_union[slot(p, j, 0)])
      min_q_density = std::min(min_q_density,
                               inst.value(i, j) / inst.weight(i, j));
    for (int i : missed)
      if (inst.value(i, j) / inst.weight(i, j) > min_q_density + kSlack)
        flag(rep.conditional_property_violations,
             "queried density below a missed density at knapsack " +
                 std::to_string(j));
  }
  return rep;
}

void merge(LemmaReport& into, const LemmaReport& from) {
  into.realizations += from.realizations;
  into.calls += from.calls;
  into.weight_domination_violations += from.weight_domination_violations;
  into.uniqueness_violations += from.uniqueness_violations;
  into.alg_outside_query_violations += from.alg_outside_query_violations;
  into.optbar_mismatches += from.optbar_mismatches;
  into.ratio_ordering_violations += from.ratio_ordering_violations;
  into.conditional_property_violations +=
      from.conditional_property_violations;
  into.large_margin_sum += from.large_margin_sum;
  into.large_margin_sq += from.large_margin_sq;
  into.small_margin_sum += from.small_margin_sum;
  into.small_margin_sq += from.small_margin_sq;
  into.super_margin_sum += from.super_margin_sum;
  into.super_margin_sq += from.super_margin_sq;
  for (const auto& v : from.violations)
    if (into.violations.size() < 100) into.violations.push_back(v);
}

namespace {

nlohmann::json margin_json(double sum, double sq, long n) {
  nlohmann::json j;
  const double mean = n > 0 ? sum / n : 0.0;
  j["mean"] = mean;
  if (n > 1) {
    const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1));
    j["stderr"] = std::sqrt(var / n);
  } else {
    j["stderr"] = 0.0;
  }
  return j;
}

}  // namespace

nlohmann::json report_to_json(const LemmaReport& r) {
  nlohmann::json j;
  j["realizations"] = r.realizations;
  j["calls"] = r.calls;
  j["violations"] = {
      {"weight_domination", r.weight_domination_violations},
      {"uniqueness", r.uniqueness_violations},
      {"alg_outside_query", r.alg_outside_query_violations},
      {"optbar_mismatch", r.optbar_mismatches},
      {"ratio_ordering", r.ratio_ordering_violations},
      {"conditional_properties", r.conditional_property_violations},
      {"total", r.total_violations()},
  };
  j["margins"] = {
      {"large_bucket", margin_json(r.large_margin_sum, r.large_margin_sq,
                                   r.realizations)},
      {"small_bucket", margin_json(r.small_margin_sum, r.small_margin_sq,
                                   r.realizations)},
      {"super_bucket", margin_json(r.super_margin_sum, r.super_margin_sq,
                                   r.realizations)},
  };
  if (!r.violations.empty()) j["violation_details"] = r.violations;
  return j;
}

}  // namespace sparsepack
