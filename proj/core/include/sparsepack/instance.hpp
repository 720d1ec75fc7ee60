#ifndef SPARSEPACK_INSTANCE_HPP_
#define SPARSEPACK_INSTANCE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparsepack {

// Thrown when an item or knapsack index is outside the instance, as
// opposed to a merely infeasible (but well-formed) input.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class InstanceKind { Kp, Mkp, Gap };

// 0/1 knapsack, multiple knapsack, and generalized assignment share one
// representation: n items, m knapsacks, per-pair values/weights stored
// row-major (item-major). KP is m == 1; MKP has knapsack-independent
// columns. Immutable after construction; safe to share across threads.
class GapInstance {
 public:
  GapInstance() = default;
  GapInstance(InstanceKind kind, int n, int m, std::vector<double> values,
              std::vector<double> weights, std::vector<double> capacities,
              bool integer_weights = false);

  InstanceKind kind() const { return kind_; }
  int n() const { return n_; }
  int m() const { return m_; }
  double value(int i, int j) const { return values_[idx(i, j)]; }
  double weight(int i, int j) const { return weights_[idx(i, j)]; }
  double capacity(int j) const { return capacities_[j]; }
  const std::vector<double>& capacities() const { return capacities_; }
  bool integer_weights() const { return integer_weights_; }

  void check_item(int i) const {
    if (i < 0 || i >= n_) throw IndexError("item index out of range");
  }
  void check_knapsack(int j) const {
    if (j < 0 || j >= m_) throw IndexError("knapsack index out of range");
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * m_ + j;
  }

  InstanceKind kind_ = InstanceKind::Kp;
  int n_ = 0;
  int m_ = 1;
  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<double> capacities_;
  bool integer_weights_ = false;
};

// Set of (item, knapsack) pairs; each item appears at most once.
struct Assignment {
  std::vector<std::pair<int, int>> pairs;

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
  void add(int item, int knapsack) { pairs.emplace_back(item, knapsack); }
  // Canonical form: sorted by item index. Assignments produced by the
  // solvers are already canonical.
  void normalize();
  bool operator==(const Assignment& other) const = default;
};

struct ItemSet {
  std::vector<int> indices;  // unique, ascending

  bool empty() const { return indices.empty(); }
  std::size_t size() const { return indices.size(); }
  bool contains(int i) const;
  void normalize();
  bool operator==(const ItemSet& other) const = default;
};

ItemSet intersect(const ItemSet& a, const ItemSet& b);
ItemSet full_item_set(int n);

// True iff each item appears at most once and every knapsack load is
// within capacity. Throws IndexError on out-of-range indices.
bool validate_assignment(const GapInstance& inst, const Assignment& a);

double assignment_value(const GapInstance& inst, const Assignment& a);
double knapsack_load(const GapInstance& inst, const Assignment& a, int j);

// Sub-instance over a subset of items, plus the map from new indices back
// to the original ones (new index k corresponds to item_map[k]).
struct RestrictedInstance {
  GapInstance instance;
  std::vector<int> item_map;
};

RestrictedInstance restrict(const GapInstance& inst, const ItemSet& items);

// Lifts an assignment on a restricted instance back to original indices.
Assignment unrestrict(const Assignment& a, const std::vector<int>& item_map);

}  // namespace sparsepack

#endif  // SPARSEPACK_INSTANCE_HPP_
