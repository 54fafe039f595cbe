#pragma once

// Littlestone dimension by game recursion, shattered-tree search and
// verification, and a fuel-driven tree enumerator for enumerable classes.

#include <optional>
#include <unordered_map>
#include <vector>

#include "colearn/classes.hpp"

namespace colearn {

/// Complete binary tree in heap layout: nodes[i - 1] is node i, the
/// children of node i are 2i (label 0) and 2i + 1 (label 1).
struct ShatteredTree {
  unsigned depth = 0;
  std::vector<Instance> nodes;

  Instance node(std::size_t one_based) const { return nodes.at(one_based - 1); }
  friend bool operator==(const ShatteredTree&, const ShatteredTree&) = default;
};

/// Node index visited at step j (1-based) along the label path y.
std::size_t tree_index(const std::vector<Label>& path, std::size_t j);

/// Instances on which the rows disagree.
Row splitting_mask(const std::vector<Row>& rows);

/// Memo of Ldim values keyed on sorted row sets over one domain. Confined to
/// one caller; not synchronized.
class LdimMemo {
 public:
  explicit LdimMemo(std::size_t domain_size) : domain_size_(domain_size) {}

  int of(const std::vector<Row>& sorted_rows);
  int of(const FiniteClass& h);
  std::size_t domain_size() const { return domain_size_; }
  std::size_t entries() const { return memo_.size(); }

 private:
  std::size_t domain_size_;
  std::unordered_map<std::vector<Row>, int, RowSetHash> memo_;
};

int ldim(const FiniteClass& h);

/// Witness of depth d or nullopt when no H-shattered tree of depth d exists.
/// Does not consult ldim. d = 0 yields the empty tree for nonempty H.
std::optional<ShatteredTree> find_shattered_tree(const FiniteClass& h, unsigned d);

/// Checks every label path with the literal node index formula. Throws
/// std::invalid_argument when nodes.size() != 2^d - 1.
bool verify_shattered_tree(const FiniteClass& h, const ShatteredTree& tree, unsigned d);

/// Largest d with a witness tree, by repeated search (-1 for the empty class).
int max_shattered_depth(const FiniteClass& h);

struct TreeSearchResult {
  enum class Status { found, fuel_exhausted };
  Status status = Status::fuel_exhausted;
  std::optional<ShatteredTree> tree;
  /// Slot and instance window in which the witness was found.
  std::size_t slots = 0;
  std::size_t instances = 0;
  std::size_t fuel_used = 0;
};

/// Incremental search for a depth-d tree shattered by an enumerable class.
/// Stage k inspects slots below k on instances below min(k, 128) and costs
/// k * (k + 1) fuel. Fuel arrives one unit at a time through tick().
class TreeEnumerator {
 public:
  TreeEnumerator(EnumerableClass h, unsigned depth);

  /// Adds one unit of fuel; returns true once a witness is known.
  bool tick();
  bool found() const { return result_.status == TreeSearchResult::Status::found; }
  const TreeSearchResult& result() const { return result_; }

 private:
  void run_stage();

  EnumerableClass h_;
  unsigned depth_;
  std::size_t stage_ = 1;
  std::size_t credit_ = 0;
  TreeSearchResult result_;
};

TreeSearchResult enumerate_shattered_trees(const EnumerableClass& h, unsigned d, std::size_t fuel);

}  // namespace colearn
