#pragma once

// Algorithm X over dancing links. Items are 0..n-1, all primary.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace olsmub {

class ExactCover {
 public:
  explicit ExactCover(int items) : items_(items) {
    // Node 0 is the root; nodes 1..items are column headers.
    nodes_.resize(items + 1);
    size_.assign(items + 1, 0);
    for (int i = 0; i <= items; ++i) {
      nodes_[i].left = i == 0 ? items : i - 1;
      nodes_[i].right = i == items ? 0 : i + 1;
      nodes_[i].up = nodes_[i].down = i;
      nodes_[i].column = i;
    }
  }

  /// Adds an option covering the given items; returns its option id.
  int add_option(const std::vector<int>& items) {
    const int id = static_cast<int>(option_count_++);
    int first = -1;
    for (int item : items) {
      const int col = item + 1;
      Node n;
      n.column = col;
      n.option = id;
      n.up = nodes_[col].up;
      n.down = col;
      const int idx = static_cast<int>(nodes_.size());
      nodes_.push_back(n);
      nodes_[nodes_[col].up].down = idx;
      nodes_[col].up = idx;
      ++size_[col];
      if (first < 0) {
        first = idx;
        nodes_[idx].left = nodes_[idx].right = idx;
      } else {
        nodes_[idx].right = first;
        nodes_[idx].left = nodes_[first].left;
        nodes_[nodes_[first].left].right = idx;
        nodes_[first].left = idx;
      }
    }
    return id;
  }

  struct Stats {
    std::uint64_t nodes = 0;
    std::uint64_t solutions = 0;
    bool budget_exhausted = false;
  };

  /// Enumerates exact covers. The callback receives option ids in selection
  /// order and returns false to stop. Branches on the item with the fewest
  /// remaining options, lowest item index on ties.
  Stats solve(const std::function<bool(const std::vector<int>&)>& on_solution,
              std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max()) {
    Stats stats;
    std::vector<int> partial;
    search(partial, on_solution, node_budget, stats);
    return stats;
  }

  int items() const { return items_; }

 private:
  struct Node {
    int left = 0, right = 0, up = 0, down = 0, column = 0, option = -1;
  };

  void cover(int c) {
    nodes_[nodes_[c].right].left = nodes_[c].left;
    nodes_[nodes_[c].left].right = nodes_[c].right;
    for (int i = nodes_[c].down; i != c; i = nodes_[i].down)
      for (int j = nodes_[i].right; j != i; j = nodes_[j].right) {
        nodes_[nodes_[j].down].up = nodes_[j].up;
        nodes_[nodes_[j].up].down = nodes_[j].down;
        --size_[nodes_[j].column];
      }
  }

  void uncover(int c) {
    for (int i = nodes_[c].up; i != c; i = nodes_[i].up)
      for (int j = nodes_[i].left; j != i; j = nodes_[j].left) {
        ++size_[nodes_[j].column];
        nodes_[nodes_[j].down].up = j;
        nodes_[nodes_[j].up].down = j;
      }
    nodes_[nodes_[c].right].left = c;
    nodes_[nodes_[c].left].right = c;
  }

  // Returns false when the search should stop.
  bool search(std::vector<int>& partial, const std::function<bool(const std::vector<int>&)>& on_solution,
              std::uint64_t budget, Stats& stats) {
    if (nodes_[0].right == 0) {
      ++stats.solutions;
      return on_solution(partial);
    }
    if (++stats.nodes > budget) {
      stats.budget_exhausted = true;
      return false;
    }
    int best = -1;
    for (int c = nodes_[0].right; c != 0; c = nodes_[c].right)
      if (best < 0 || size_[c] < size_[best]) best = c;
    if (size_[best] == 0) return true;

    cover(best);
    bool keep_going = true;
    for (int r = nodes_[best].down; r != best && keep_going; r = nodes_[r].down) {
      partial.push_back(nodes_[r].option);
      for (int j = nodes_[r].right; j != r; j = nodes_[j].right) cover(nodes_[j].column);
      keep_going = search(partial, on_solution, budget, stats);
      for (int j = nodes_[r].left; j != r; j = nodes_[j].left) uncover(nodes_[j].column);
      partial.pop_back();
    }
    uncover(best);
    return keep_going;
  }

  int items_;
  std::size_t option_count_ = 0;
  std::vector<Node> nodes_;
  std::vector<int> size_;
};

}  // namespace olsmub
