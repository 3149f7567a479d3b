#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace rrt {

// Weighted union with path compression over elements 0..n-1.
// Unions here always attach a later-created element to an earlier component,
// so the representative of every set stays its smallest element.
class UnionFind {
 public:
  UnionFind() = default;
  explicit UnionFind(std::uint32_t n) { reset(n); }

  void reset(std::uint32_t n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), 0u);
    size_.assign(n, 1u);
  }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Attach the component of b under the component of a (a's representative
  // wins ties), keeping the smallest element as representative when a < b.
  void unite(std::uint32_t a, std::uint32_t b) {
    std::uint32_t ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (size_[ra] >= size_[rb]) {
      parent_[rb] = ra;
      size_[ra] += size_[rb];
    } else {
      parent_[ra] = rb;
      size_[rb] += size_[ra];
    }
  }

  std::uint32_t component_size(std::uint32_t x) { return size_[find(x)]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

}  // namespace rrt
