#pragma once

#include <cstdint>
#include <vector>

namespace smlab {

/// Primal network simplex for uncapacitated min-cost flow with integer
/// supplies and integer costs.
///
/// Spanning-tree bookkeeping follows the thread/successor representation
/// with a strongly feasible artificial starting tree and block-search
/// pivoting. All arithmetic is exact in 64-bit integers, so termination and
/// optimality do not depend on floating-point tolerances.
class NetworkSimplex {
 public:
  enum class Status { Optimal, Infeasible };

  explicit NetworkSimplex(int node_count);

  void reserve_arcs(std::size_t count);
  /// Adds an arc with infinite capacity; returns its index.
  int add_arc(int source, int target, std::int64_t cost);
  /// Positive supply is a source, negative a sink. Supplies must sum to zero.
  void set_supply(int node, std::int64_t supply);

  Status run();

  std::int64_t flow(int arc) const { return flow_[static_cast<std::size_t>(arc)]; }
  int arc_count() const { return arc_count_; }
  int arc_source(int arc) const { return source_[static_cast<std::size_t>(arc)]; }
  int arc_target(int arc) const { return target_[static_cast<std::size_t>(arc)]; }
  std::int64_t arc_cost(int arc) const { return cost_[static_cast<std::size_t>(arc)]; }
  std::int64_t potential(int node) const { return pi_[static_cast<std::size_t>(node)]; }
  std::int64_t pivots() const { return pivots_; }

 private:
  bool find_entering_arc();
  void find_join_node();
  bool find_leaving_arc();
  void change_flow(bool change);
  void update_tree_structure();
  void update_potential();

  int node_count_;
  int arc_count_ = 0;
  int root_ = 0;

  std::vector<int> source_;
  std::vector<int> target_;
  std::vector<std::int64_t> cost_;
  std::vector<std::int64_t> flow_;
  std::vector<signed char> state_;
  std::vector<std::int64_t> supply_;

  std::vector<std::int64_t> pi_;
  std::vector<int> parent_;
  std::vector<int> pred_;
  std::vector<int> thread_;
  std::vector<int> rev_thread_;
  std::vector<int> succ_num_;
  std::vector<int> last_succ_;
  std::vector<signed char> pred_dir_;
  std::vector<int> dirty_revs_;

  int block_size_ = 0;
  int next_arc_ = 0;
  int in_arc_ = 0;
  int join_ = 0;
  int u_in_ = 0, v_in_ = 0, u_out_ = 0, v_out_ = 0;
  std::int64_t delta_ = 0;
  std::int64_t pivots_ = 0;
};

}  // namespace smlab
