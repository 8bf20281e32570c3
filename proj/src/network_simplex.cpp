#include "smlab/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smlab {

namespace {

constexpr signed char kStateUpper = -1;
constexpr signed char kStateTree = 0;
constexpr signed char kStateLower = 1;
constexpr signed char kDirUp = 1;
constexpr signed char kDirDown = -1;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

}  // namespace

NetworkSimplex::NetworkSimplex(int node_count) : node_count_(node_count) {
  if (node_count < 1) throw std::invalid_argument("NetworkSimplex: need at least one node");
  supply_.assign(static_cast<std::size_t>(node_count), 0);
}

void NetworkSimplex::reserve_arcs(std::size_t count) {
  source_.reserve(count + node_count_);
  target_.reserve(count + node_count_);
  cost_.reserve(count + node_count_);
}

int NetworkSimplex::add_arc(int source, int target, std::int64_t cost) {
  if (source < 0 || source >= node_count_ || target < 0 || target >= node_count_) {
    throw std::out_of_range("NetworkSimplex::add_arc: node index out of range");
  }
  source_.push_back(source);
  target_.push_back(target);
  cost_.push_back(cost);
  return arc_count_++;
}

void NetworkSimplex::set_supply(int node, std::int64_t supply) {
  supply_.at(static_cast<std::size_t>(node)) = supply;
}

NetworkSimplex::Status NetworkSimplex::run() {
  std::int64_t total = 0;
  for (std::int64_t s : supply_) total += s;
  if (total != 0) return Status::Infeasible;

  const int n = node_count_;
  const int m = arc_count_;
  const auto all_nodes = static_cast<std::size_t>(n + 1);
  const auto all_arcs = static_cast<std::size_t>(m + n);
  root_ = n;

  source_.resize(all_arcs);
  target_.resize(all_arcs);
  cost_.resize(all_arcs);
  flow_.assign(all_arcs, 0);
  state_.assign(all_arcs, kStateLower);
  pi_.assign(all_nodes, 0);
  parent_.assign(all_nodes, -1);
  pred_.assign(all_nodes, -1);
  thread_.assign(all_nodes, 0);
  rev_thread_.assign(all_nodes, 0);
  succ_num_.assign(all_nodes, 0);
  last_succ_.assign(all_nodes, 0);
  pred_dir_.assign(all_nodes, kDirUp);

  std::int64_t max_cost = 0;
  for (int e = 0; e < m; ++e) max_cost = std::max(max_cost, std::abs(cost_[e]));
  const std::int64_t art_cost = (max_cost + 1) * n;

  parent_[root_] = -1;
  pred_[root_] = -1;
  thread_[root_] = 0;
  rev_thread_[0] = root_;
  succ_num_[root_] = n + 1;
  last_succ_[root_] = root_ - 1;
  pi_[root_] = 0;

  for (int u = 0, e = m; u != n; ++u, ++e) {
    parent_[u] = root_;
    pred_[u] = e;
    thread_[u] = u + 1;
    rev_thread_[u + 1] = u;
    succ_num_[u] = 1;
    last_succ_[u] = u;
    state_[e] = kStateTree;
    if (supply_[u] >= 0) {
      pred_dir_[u] = kDirUp;
      pi_[u] = 0;
      source_[e] = u;
      target_[e] = root_;
      flow_[e] = supply_[u];
      cost_[e] = 0;
    } else {
      pred_dir_[u] = kDirDown;
      pi_[u] = art_cost;
      source_[e] = root_;
      target_[e] = u;
      flow_[e] = -supply_[u];
      cost_[e] = art_cost;
    }
  }

  block_size_ = std::max(10, static_cast<int>(std::sqrt(static_cast<double>(std::max(m, 1)))));
  next_arc_ = 0;
  pivots_ = 0;

  while (find_entering_arc()) {
    find_join_node();
    const bool change = find_leaving_arc();
    if (delta_ >= kInf) throw std::logic_error("NetworkSimplex: unbounded with nonnegative costs");
    change_flow(change);
    if (change) {
      update_tree_structure();
      update_potential();
    }
    ++pivots_;
  }

  for (int e = m; e < m + n; ++e) {
    if (flow_[e] != 0) return Status::Infeasible;
  }
  return Status::Optimal;
}

bool NetworkSimplex::find_entering_arc() {
  const int m = arc_count_;
  if (m == 0) return false;
  std::int64_t min = 0;
  int cnt = block_size_;
  int e = next_arc_;
  auto reduced = [this](int a) {
    return state_[a] * (cost_[a] + pi_[source_[a]] - pi_[target_[a]]);
  };
  for (; e != m; ++e) {
    const std::int64_t c = reduced(e);
    if (c < min) {
      min = c;
      in_arc_ = e;
    }
    if (--cnt == 0) {
      if (min < 0) {
        next_arc_ = e + 1 == m ? 0 : e + 1;
        return true;
      }
      cnt = block_size_;
    }
  }
  for (e = 0; e != next_arc_; ++e) {
    const std::int64_t c = reduced(e);
    if (c < min) {
      min = c;
      in_arc_ = e;
    }
    if (--cnt == 0) {
      if (min < 0) {
        next_arc_ = e + 1;
        return true;
      }
      cnt = block_size_;
    }
  }
  if (min >= 0) return false;
  next_arc_ = e == m ? 0 : e;
  return true;
}

void NetworkSimplex::find_join_node() {
  int u = source_[in_arc_];
  int v = target_[in_arc_];
  while (u != v) {
    if (succ_num_[u] < succ_num_[v]) {
      u = parent_[u];
    } else {
      v = parent_[v];
    }
  }
  join_ = u;
}

bool NetworkSimplex::find_leaving_arc() {
  int first, second;
  if (state_[in_arc_] == kStateLower) {
    first = source_[in_arc_];
    second = target_[in_arc_];
  } else {
    first = target_[in_arc_];
    second = source_[in_arc_];
  }
  delta_ = kInf;
  int result = 0;
  // Every arc is uncapacitated, so only arcs whose flow decreases around the
  // cycle can block it.
  for (int u = first; u != join_; u = parent_[u]) {
    const int e = pred_[u];
    const std::int64_t d = pred_dir_[u] == kDirUp ? flow_[e] : kInf;
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
    }
  }
  for (int u = second; u != join_; u = parent_[u]) {
    const int e = pred_[u];
    const std::int64_t d = pred_dir_[u] == kDirDown ? flow_[e] : kInf;
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
    }
  }
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return result != 0;
}

void NetworkSimplex::change_flow(bool change) {
  if (delta_ > 0) {
    const std::int64_t val = state_[in_arc_] * delta_;
    flow_[in_arc_] += val;
    for (int u = source_[in_arc_]; u != join_; u = parent_[u]) {
      flow_[pred_[u]] -= pred_dir_[u] * val;
    }
    for (int u = target_[in_arc_]; u != join_; u = parent_[u]) {
      flow_[pred_[u]] += pred_dir_[u] * val;
    }
  }
  if (change) {
    state_[in_arc_] = kStateTree;
    state_[pred_[u_out_]] = flow_[pred_[u_out_]] == 0 ? kStateLower : kStateUpper;
  } else {
    state_[in_arc_] = static_cast<signed char>(-state_[in_arc_]);
  }
}

void NetworkSimplex::update_tree_structure() {
  const int old_rev_thread = rev_thread_[u_out_];
  const int old_succ_num = succ_num_[u_out_];
  const int old_last_succ = last_succ_[u_out_];
  v_out_ = parent_[u_out_];

  if (u_in_ == u_out_) {
    parent_[u_in_] = v_in_;
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == source_[in_arc_] ? kDirUp : kDirDown;

    if (thread_[v_in_] != u_out_) {
      int after = thread_[old_last_succ];
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
      after = thread_[v_in_];
      thread_[v_in_] = u_out_;
      rev_thread_[u_out_] = v_in_;
      thread_[old_last_succ] = after;
      rev_thread_[after] = old_last_succ;
    }
  } else {
    // When old_rev_thread == v_in, join and v_out coincide.
    const int thread_continue = old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

    // Re-hang the stem from u_in up to u_out under v_in.
    int stem = u_in_;
    int par_stem = v_in_;
    int next_stem;
    int last = last_succ_[u_in_];
    int before, after = thread_[last];
    thread_[v_in_] = u_in_;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    while (stem != u_out_) {
      next_stem = parent_[stem];
      thread_[last] = next_stem;
      dirty_revs_.push_back(last);

      before = rev_thread_[stem];
      thread_[before] = after;
      rev_thread_[after] = before;

      parent_[stem] = par_stem;
      par_stem = stem;
      stem = next_stem;

      last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
      after = thread_[last];
    }
    parent_[u_out_] = par_stem;
    thread_[last] = thread_continue;
    rev_thread_[thread_continue] = last;
    last_succ_[u_out_] = last;

    if (old_rev_thread != v_in_) {
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
    }

    for (int u : dirty_revs_) rev_thread_[thread_[u]] = u;

    int tmp_sc = 0;
    const int tmp_ls = last_succ_[u_out_];
    for (int u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
      pred_[u] = pred_[p];
      pred_dir_[u] = static_cast<signed char>(-pred_dir_[p]);
      tmp_sc += succ_num_[u] - succ_num_[p];
      succ_num_[u] = tmp_sc;
      last_succ_[p] = tmp_ls;
    }
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == source_[in_arc_] ? kDirUp : kDirDown;
    succ_num_[u_in_] = old_succ_num;
  }

  const int up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
  const int last_succ_out = last_succ_[u_out_];
  for (int u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u]) {
    last_succ_[u] = last_succ_out;
  }

  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
      last_succ_[u] = old_rev_thread;
    }
  } else if (last_succ_out != old_last_succ) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
      last_succ_[u] = last_succ_out;
    }
  }

  for (int u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
  for (int u = v_out_; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
}

void NetworkSimplex::update_potential() {
  const std::int64_t sigma = pi_[v_in_] - pi_[u_in_] - pred_dir_[u_in_] * cost_[in_arc_];
  const int end = thread_[last_succ_[u_in_]];
  for (int u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
}

}  // namespace smlab
