#include "rrt/percolation.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rrt/union_find.hpp"

namespace rrt {

namespace {

// Shared extraction pass: vertices in label order, keep_edge(v) says whether
// v stays attached to parent(v). Since parent(v) < v, every kept edge joins
// v to an already-labelled component, so components never merge and the
// representative of each cluster is its smallest vertex.
template <class KeepEdge>
ClusterPartition extract_clusters(const RecursiveTree& tree, const SiteMarks& marks,
                                  PercolationKind kind, const KeepEdge& keep_edge) {
  const Vertex n = tree.size();
  thread_local UnionFind uf;
  uf.reset(n);
  for (Vertex v = 2; v <= n; ++v)
    if (keep_edge(v)) uf.unite(tree.parent_of(v) - 1, v - 1);

  ClusterPartition part;
  part.kind = kind;
  part.cluster_of.resize(n);
  std::vector<std::uint32_t> id_of_rep(n, UINT32_MAX);
  for (Vertex v = 1; v <= n; ++v) {
    std::uint32_t rep = uf.find(v - 1);
    std::uint32_t& id = id_of_rep[rep];
    if (id == UINT32_MAX) {
      id = part.num_clusters();
      part.roots.push_back(Vertex(rep + 1));  // rep is the smallest vertex
      part.sizes.push_back(0);
      part.cluster_open.push_back(marks.is_open(Vertex(rep + 1)) ? 1 : 0);
    }
    part.cluster_of[v - 1] = id;
    ++part.sizes[id];
  }
  return part;
}

}  // namespace

ClusterPartition site_partition(const RecursiveTree& tree, const SiteMarks& marks) {
  if (marks.size() != tree.size())
    throw std::invalid_argument("site_partition: marks must cover all vertices");
  return extract_clusters(tree, marks, PercolationKind::site, [&](Vertex v) {
    return marks.is_open(v) && marks.is_open(tree.parent_of(v));
  });
}

ClusterPartition bond_partition(const RecursiveTree& tree, const SiteMarks& marks) {
  if (marks.size() != tree.size())
    throw std::invalid_argument("bond_partition: marks must cover all vertices");
  auto part = extract_clusters(tree, marks, PercolationKind::bond,
                               [&](Vertex v) { return marks.is_open(v); });
  // Bond clusters carry no open/closed attribute.
  std::fill(part.cluster_open.begin(), part.cluster_open.end(), 1);
  return part;
}

std::int64_t RootIsolationResult::find_piece(std::uint32_t bond_cluster,
                                             std::uint32_t piece) const {
  for (std::size_t c = 0; c < origin_cluster.size(); ++c)
    if (origin_cluster[c] == bond_cluster && origin_piece[c] == piece)
      return std::int64_t(c);
  return -1;
}

RootIsolationResult root_isolation(const RecursiveTree& tree, const SiteMarks& marks,
                                   const ClusterPartition& bond) {
  const Vertex n = tree.size();
  if (bond.kind != PercolationKind::bond || bond.size() != n || marks.size() != n)
    throw std::invalid_argument("root_isolation: partition does not match the tree/marks");
  // Validate that the bond partition really came from these inputs.
  for (Vertex v = 2; v <= n; ++v) {
    bool linked = bond.cluster_of[v - 1] == bond.cluster_of[tree.parent_of(v) - 1];
    if (linked != marks.is_open(v))
      throw std::invalid_argument("root_isolation: partition does not match the tree/marks");
  }

  const bool keep_first_whole = marks.is_open(1);
  auto isolated = [&](std::uint32_t bond_id) {
    return !(bond_id == 0 && keep_first_whole);
  };
  // An edge of the bond percolation is cut exactly when it leaves the root
  // of an isolated cluster.
  auto keep_edge = [&](Vertex v) {
    if (!marks.is_open(v)) return false;
    std::uint32_t bid = bond.cluster_of[v - 1];
    Vertex broot = bond.roots[bid];
    return tree.parent_of(v) != broot || !isolated(bid);
  };

  RootIsolationResult res;
  res.partition = extract_clusters(tree, marks, PercolationKind::site, keep_edge);
  res.first_cluster_intact = keep_first_whole;

  // Piece labels: pieces of one bond cluster appear in root order, and the
  // isolated root's singleton (smallest label of the cluster) comes first.
  res.origin_cluster.resize(res.partition.num_clusters());
  res.origin_piece.resize(res.partition.num_clusters());
  std::vector<std::uint32_t> next_piece(bond.num_clusters(), 0);
  for (std::uint32_t c = 0; c < res.partition.num_clusters(); ++c) {
    std::uint32_t bid = bond.cluster_of[res.partition.roots[c] - 1];
    res.origin_cluster[c] = bid;
    res.origin_piece[c] = next_piece[bid]++;
  }
  return res;
}

void ClusterCensus::add(std::size_t k, std::uint64_t c) {
  if (k >= counts.size()) counts.resize(k + 1, 0);
  counts[k] += c;
}

std::uint64_t ClusterCensus::mass() const {
  std::uint64_t m = count(0);
  for (std::size_t k = 1; k < counts.size(); ++k) m += k * counts[k];
  return m;
}

bool ClusterCensus::operator==(const ClusterCensus& o) const {
  if (n != o.n) return false;
  std::size_t len = std::max(counts.size(), o.counts.size());
  for (std::size_t k = 0; k < len; ++k)
    if (count(k) != o.count(k)) return false;
  return true;
}

ClusterCensus census(const ClusterPartition& partition) {
  ClusterCensus c;
  c.n = partition.size();
  for (std::uint32_t i = 0; i < partition.num_clusters(); ++i) {
    bool closed_singleton = partition.kind == PercolationKind::site &&
                            partition.cluster_open[i] == 0;
    c.add(closed_singleton ? 0 : partition.sizes[i]);
  }
  return c;
}

ClusterCensus initial_census(double p, Rng& rng) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("initial_census: p must lie in (0,1)");
  ClusterCensus c;
  c.n = 1;
  c.add(rng.bernoulli(p) ? 1 : 0);
  return c;
}

void census_step(ClusterCensus& census, double p, Rng& rng) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("census_step: p must lie in (0,1)");
  if (census.n < 1 || census.mass() != census.n)
    throw std::invalid_argument("census_step: census mass does not match n");
  const double n = double(census.n);
  double u = rng.uniform01();
  // Inverse transform over: 1-p, p*X(0)/n, then p*k*X(k)/n for k >= 1.
  if (u < 1.0 - p) {
    census.add(0);
  } else {
    u = (u - (1.0 - p)) / p * n;  // now uniform on [0, n)
    double acc = double(census.count(0));
    if (u < acc) {
      census.add(1);  // open vertex next to a closed one: a new singleton
    } else {
      std::size_t k = 1;
      for (;; ++k) {
        acc += double(k) * double(census.count(k));
        if (u < acc || k + 1 >= census.counts.size()) break;
      }
      // Floating-point slack lands on the last occupied class.
      while (census.count(k) == 0) --k;
      census.counts[k] -= 1;
      census.add(k + 1);
    }
  }
  census.n += 1;
}

std::vector<double> ranked_sizes(const ClusterPartition& partition, double scale) {
  std::vector<double> v(partition.sizes.begin(), partition.sizes.end());
  std::sort(v.begin(), v.end(), std::greater<double>());
  for (auto& x : v) x *= scale;
  return v;
}

std::string census_to_csv(const ClusterCensus& census) {
  std::ostringstream out;
  out << "k,count\n";
  for (std::size_t k = 0; k < census.counts.size(); ++k)
    if (census.counts[k] != 0) out << k << "," << census.counts[k] << "\n";
  return out.str();
}

std::string partition_to_json(const ClusterPartition& partition) {
  nlohmann::json j;
  j["cluster_of"] = partition.cluster_of;
  j["roots"] = partition.roots;
  j["sizes"] = partition.sizes;
  return j.dump();
}

}  // namespace rrt
