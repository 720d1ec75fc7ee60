#include "sparsepack/instance.hpp"

#include <algorithm>
#include <cmath>

namespace sparsepack {

GapInstance::GapInstance(InstanceKind kind, int n, int m,
                         std::vector<double> values,
                         std::vector<double> weights,
                         std::vector<double> capacities, bool integer_weights)
    : kind_(kind),
      n_(n),
      m_(m),
      values_(std::move(values)),
      weights_(std::move(weights)),
      capacities_(std::move(capacities)),
      integer_weights_(integer_weights) {
  if (n_ < 0 || m_ < 1) throw std::invalid_argument("bad instance dimensions");
  const std::size_t cells = static_cast<std::size_t>(n_) * m_;
  if (values_.size() != cells || weights_.size() != cells ||
      capacities_.size() != static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("instance array sizes do not match n, m");
  }
  for (double c : capacities_) {
    if (!(c > 0.0) || !std::isfinite(c))
      throw std::invalid_argument("capacities must be finite and positive");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("values must be finite and nonnegative");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("weights must be finite and positive");
  }
  if (kind_ == InstanceKind::Kp && m_ != 1)
    throw std::invalid_argument("kp instances have exactly one knapsack");
  if (kind_ == InstanceKind::Mkp) {
    for (int i = 0; i < n_; ++i) {
      for (int j = 1; j < m_; ++j) {
        if (value(i, j) != value(i, 0) || weight(i, j) != weight(i, 0))
          throw std::invalid_argument(
              "mkp instances require knapsack-independent items");
      }
    }
  }
  // Every item must fit in at least one knapsack.
  for (int i = 0; i < n_; ++i) {
    bool feasible = false;
    for (int j = 0; j < m_ && !feasible; ++j)
      feasible = weight(i, j) <= capacity(j);
    if (!feasible)
      throw std::invalid_argument("item " + std::to_string(i) +
                                  " fits in no knapsack");
  }
}

void Assignment::normalize() {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

bool ItemSet::contains(int i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

void ItemSet::normalize() {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
}

ItemSet intersect(const ItemSet& a, const ItemSet& b) {
  ItemSet out;
  std::set_intersection(a.indices.begin(), a.indices.end(), b.indices.begin(),
                        b.indices.end(), std::back_inserter(out.indices));
  return out;
}

ItemSet full_item_set(int n) {
  ItemSet s;
  s.indices.resize(n);
  for (int i = 0; i < n; ++i) s.indices[i] = i;
  return s;
}

bool validate_assignment(const GapInstance& inst, const Assignment& a) {
  std::vector<double> load(inst.m(), 0.0);
  std::vector<char> used(inst.n(), 0);
  for (auto [i, j] : a.pairs) {
    inst.check_item(i);
    inst.check_knapsack(j);
    if (used[i]) return false;
    used[i] = 1;
    load[j] += inst.weight(i, j);
  }
  for (int j = 0; j < inst.m(); ++j)
    if (load[j] > inst.capacity(j)) return false;
  return true;
}

double assignment_value(const GapInstance& inst, const Assignment& a) {
  double v = 0.0;
  for (auto [i, j] : a.pairs) {
    inst.check_item(i);
    inst.check_knapsack(j);
    v += inst.value(i, j);
  }
  return v;
}

double knapsack_load(const GapInstance& inst, const Assignment& a, int j) {
  inst.check_knapsack(j);
  double w = 0.0;
  for (auto [i, jj] : a.pairs) {
    inst.check_item(i);
    if (jj == j) w += inst.weight(i, j);
  }
  return w;
}

RestrictedInstance restrict(const GapInstance& inst, const ItemSet& items) {
  const int m = inst.m();
  std::vector<double> values, weights;
  values.reserve(items.size() * m);
  weights.reserve(items.size() * m);
  std::vector<int> map;
  map.reserve(items.size());
  for (int i : items.indices) {
    inst.check_item(i);
    map.push_back(i);
    for (int j = 0; j < m; ++j) {
      values.push_back(inst.value(i, j));
      weights.push_back(inst.weight(i, j));
    }
  }
  GapInstance sub(inst.kind(), static_cast<int>(map.size()), m,
                  std::move(values), std::move(weights), inst.capacities(),
                  inst.integer_weights());
  return {std::move(sub), std::move(map)};
}

Assignment unrestrict(const Assignment& a, const std::vector<int>& item_map) {
  Assignment out;
  out.pairs.reserve(a.pairs.size());
  for (auto [i, j] : a.pairs) out.add(item_map.at(i), j);
  return out;
}

}  // namespace sparsepack
