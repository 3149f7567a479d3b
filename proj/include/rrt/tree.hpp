#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rrt/rng.hpp"

namespace rrt {

using Vertex = std::uint32_t;  // labels 1..n, root is always 1

// Recursive tree stored as a parent sequence: parent(v) < v for every
// v >= 2, so vertex labels increase along every root-to-leaf path.
// Birth times, when present, come from the rate-1 Yule construction and
// are strictly increasing in the label (labels are birth order).
class RecursiveTree {
 public:
  RecursiveTree() = default;
  explicit RecursiveTree(std::vector<Vertex> parents,
                         std::vector<double> births = {});

  Vertex size() const { return Vertex(parents_.size() + 1); }
  Vertex parent_of(Vertex v) const { return parents_[v - 2]; }  // v in [2, n]
  const std::vector<Vertex>& parents() const { return parents_; }

  bool has_birth_times() const { return !births_.empty(); }
  double birth_of(Vertex v) const { return births_[v - 1]; }
  const std::vector<double>& births() const { return births_; }
  // Time at which the tree reached its current size.
  double final_birth_time() const { return births_.back(); }

 private:
  std::vector<Vertex> parents_;  // parents_[v-2] = parent of vertex v
  std::vector<double> births_;   // empty, or births_[v-1] = birth time of v
};

// Per-vertex open(1)/closed(0) marks; defined for every vertex of the tree.
class SiteMarks {
 public:
  SiteMarks() = default;
  explicit SiteMarks(std::vector<std::uint8_t> open) : open_(std::move(open)) {}

  Vertex size() const { return Vertex(open_.size()); }
  bool is_open(Vertex v) const { return open_[v - 1] != 0; }
  const std::vector<std::uint8_t>& raw() const { return open_; }
  std::uint64_t open_count() const;

 private:
  std::vector<std::uint8_t> open_;
};

// Uniform attachment: vertex v picks its parent uniformly from {1..v-1}.
// No birth times on this path.
RecursiveTree grow_uniform(Vertex n, Rng& rng);

// Continuous-time construction: with k vertices alive the next birth comes
// after an Exp(k) waiting time and attaches to a uniform alive vertex.
// The tree marginal is the same as grow_uniform; birth times are kept.
RecursiveTree grow_yule(Vertex n, Rng& rng);

// i.i.d. Bernoulli(p) marks, one per vertex; requires p in (0,1).
SiteMarks mark_sites(const RecursiveTree& tree, double p, Rng& rng);

// In-place variants for hot loops (reuse the vectors' capacity).
void grow_uniform_into(std::vector<Vertex>& parents, Vertex n, Rng& rng);
void mark_sites_into(std::vector<std::uint8_t>& open, Vertex n, double p, Rng& rng);

inline constexpr Vertex kDefaultEnumerationCap = 9;

// Streams all (n-1)! recursive trees of size n exactly once, in
// lexicographic order of the parent sequence (parent(2), parent(3), ...).
class RecursiveTreeEnumerator {
 public:
  explicit RecursiveTreeEnumerator(Vertex n, Vertex cap = kDefaultEnumerationCap);

  // Writes the next parent sequence; returns false when exhausted.
  bool next(std::vector<Vertex>& parents);

  static std::uint64_t count(Vertex n);  // (n-1)!

 private:
  Vertex n_;
  std::vector<Vertex> current_;
  bool done_ = false;
  bool first_ = true;
};

// Convenience wrapper over the enumerator.
void for_each_recursive_tree(Vertex n,
                             const std::function<void(const std::vector<Vertex>&)>& fn,
                             Vertex cap = kDefaultEnumerationCap);

// Deterministic DOT text; open/closed vertices get distinct fill colors
// when marks are given.
std::string export_dot(const RecursiveTree& tree, const SiteMarks* marks = nullptr);

// JSON object {"n":..., "parent":[...], "birth":[...]?, "marks":[...]?}.
std::string to_json(const RecursiveTree& tree, const SiteMarks* marks = nullptr);
std::pair<RecursiveTree, std::optional<SiteMarks>> tree_from_json(const std::string& text);

}  // namespace rrt
