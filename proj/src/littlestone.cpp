#include "colearn/littlestone.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace colearn {

namespace {

int floor_log2(std::size_t n) { return n == 0 ? -1 : static_cast<int>(std::bit_width(n)) - 1; }

void split_rows(const std::vector<Row>& rows, Instance x, std::vector<Row>& zero, std::vector<Row>& one) {
  zero.clear();
  one.clear();
  for (Row r : rows) (row_value(r, x) ? one : zero).push_back(r);
}

Row domain_mask(std::size_t n) { return n >= kMaxDomain ? ~Row{0} : row_bit(n) - 1; }

}  // namespace

std::size_t tree_index(const std::vector<Label>& path, std::size_t j) {
  std::size_t i = std::size_t{1} << (j - 1);
  for (std::size_t k = 1; k < j; ++k) i += static_cast<std::size_t>(path[k - 1]) << (j - 1 - k);
  return i;
}

Row splitting_mask(const std::vector<Row>& rows) {
  if (rows.empty()) return 0;
  Row any = 0, all = ~Row{0};
  for (Row r : rows) {
    any |= r;
    all &= r;
  }
  return any & ~all;
}

int LdimMemo::of(const FiniteClass& h) { return of(h.rows()); }

int LdimMemo::of(const std::vector<Row>& rows) {
  if (rows.empty()) return -1;
  if (rows.size() == 1) return 0;
  if (auto it = memo_.find(rows); it != memo_.end()) return it->second;

  const int bound = floor_log2(rows.size());
  const Row split = splitting_mask(rows) & domain_mask(domain_size_);
  int best = 0;
  std::vector<Row> zero, one;
  for (Instance x = 0; x < domain_size_ && best < bound; ++x) {
    if (!row_value(split, x)) continue;
    split_rows(rows, x, zero, one);
    // 1 + min over the branches cannot beat best unless both are large enough
    if (1 + floor_log2(std::min(zero.size(), one.size())) <= best) continue;
    const int a = of(zero);
    if (1 + a <= best) continue;
    const int b = of(one);
    best = std::max(best, 1 + std::min(a, b));
  }
  memo_.emplace(rows, best);
  return best;
}

int ldim(const FiniteClass& h) {
  LdimMemo memo(h.domain_size());
  return memo.of(h);
}

namespace {

class TreeSearch {
 public:
  explicit TreeSearch(std::size_t domain) : domain_(domain) {}

  // Heap-layout subtree of the given depth, or nullopt.
  const std::optional<std::vector<Instance>>& build(const std::vector<Row>& rows, unsigned d) {
    auto key = std::make_pair(rows, d);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::optional<std::vector<Instance>> out;
    if (d == 0) {
      if (!rows.empty()) out.emplace();
    } else if (rows.size() >= (std::size_t{1} << d)) {
      const Row split = splitting_mask(rows) & domain_mask(domain_);
      std::vector<Row> zero, one;
      for (Instance x = 0; x < domain_ && !out; ++x) {
        if (!row_value(split, x)) continue;
        split_rows(rows, x, zero, one);
        if (zero.size() < (std::size_t{1} << (d - 1)) || one.size() < (std::size_t{1} << (d - 1))) continue;
        const auto left = build(zero, d - 1);
        if (!left) continue;
        const auto right = build(one, d - 1);
        if (!right) continue;
        std::vector<Instance> nodes{x};
        for (unsigned level = 0; level + 1 < d; ++level) {
          const std::size_t lo = (std::size_t{1} << level) - 1, hi = (std::size_t{1} << (level + 1)) - 1;
          nodes.insert(nodes.end(), left->begin() + lo, left->begin() + hi);
          nodes.insert(nodes.end(), right->begin() + lo, right->begin() + hi);
        }
        out = std::move(nodes);
      }
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  std::size_t domain_;
  std::map<std::pair<std::vector<Row>, unsigned>, std::optional<std::vector<Instance>>> memo_;
};

}  // namespace

std::optional<ShatteredTree> find_shattered_tree(const FiniteClass& h, unsigned d) {
  TreeSearch search(h.domain_size());
  const auto& nodes = search.build(h.rows(), d);
  if (!nodes) return std::nullopt;
  return ShatteredTree{d, *nodes};
}

bool verify_shattered_tree(const FiniteClass& h, const ShatteredTree& tree, unsigned d) {
  const std::size_t expected = (std::size_t{1} << d) - 1;
  if (tree.nodes.size() != expected)
    throw std::invalid_argument("tree has " + std::to_string(tree.nodes.size()) + " nodes, expected " +
                                std::to_string(expected));
  for (Instance x : tree.nodes)
    if (x >= h.domain_size()) return false;
  if (d == 0) return !h.empty();
  std::vector<Label> path(d);
  for (std::size_t bits = 0; bits < (std::size_t{1} << d); ++bits) {
    for (unsigned k = 0; k < d; ++k) path[k] = static_cast<Label>((bits >> (d - 1 - k)) & 1u);
    const bool realized = std::any_of(h.rows().begin(), h.rows().end(), [&](Row r) {
      for (unsigned j = 1; j <= d; ++j)
        if (row_value(r, tree.node(tree_index(path, j))) != path[j - 1]) return false;
      return true;
    });
    if (!realized) return false;
  }
  return true;
}

int max_shattered_depth(const FiniteClass& h) {
  if (h.empty()) return -1;
  TreeSearch search(h.domain_size());
  unsigned d = 0;
  while (search.build(h.rows(), d + 1)) ++d;
  return static_cast<int>(d);
}

TreeEnumerator::TreeEnumerator(EnumerableClass h, unsigned depth) : h_(std::move(h)), depth_(depth) {}

bool TreeEnumerator::tick() {
  if (found()) return true;
  ++credit_;
  ++result_.fuel_used;
  if (credit_ >= stage_ * (stage_ + 1)) {
    credit_ = 0;
    run_stage();
    ++stage_;
  }
  return found();
}

void TreeEnumerator::run_stage() {
  const std::size_t instances = std::min(stage_, kMaxDomain);
  const FiniteClass window = h_.window(stage_, instances);
  if (auto tree = find_shattered_tree(window, depth_)) {
    result_.status = TreeSearchResult::Status::found;
    result_.tree = std::move(tree);
    result_.slots = stage_;
    result_.instances = instances;
  }
}

TreeSearchResult enumerate_shattered_trees(const EnumerableClass& h, unsigned d, std::size_t fuel) {
  TreeEnumerator en(h, d);
  for (std::size_t i = 0; i < fuel; ++i)
    if (en.tick()) break;
  return en.result();
}

}  // namespace colearn
