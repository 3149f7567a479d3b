#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rrt/tree.hpp"

namespace rrt {

enum class PercolationKind { site, bond };

// Partition of the vertices into clusters. Cluster indices are assigned by
// increasing cluster root (the smallest vertex of the cluster), which the
// extraction pass produces for free because clusters are created at their
// root and vertices are scanned in label order.
struct ClusterPartition {
  PercolationKind kind = PercolationKind::site;
  std::vector<std::uint32_t> cluster_of;     // index v-1 -> cluster id
  std::vector<Vertex> roots;                 // per cluster, ascending
  std::vector<std::uint32_t> sizes;          // per cluster
  std::vector<std::uint8_t> cluster_open;    // site kind: root's mark

  Vertex size() const { return Vertex(cluster_of.size()); }
  std::uint32_t num_clusters() const { return std::uint32_t(roots.size()); }
  std::uint32_t cluster_index_of(Vertex v) const { return cluster_of[v - 1]; }
};

// Connected components of the open-open edge set; closed vertices are
// singletons. Single pass over v=2..n linking v to parent(v) iff both open.
ClusterPartition site_partition(const RecursiveTree& tree, const SiteMarks& marks);

// Bond percolation: the edge {v, parent(v)} is kept iff the mark of v is
// open, so each edge survives independently with probability p.
ClusterPartition bond_partition(const RecursiveTree& tree, const SiteMarks& marks);

// Result of root-isolation: a site-kind partition together with, for every
// output cluster, the bond cluster it came from and its piece index within
// that cluster (piece 0 is the isolated root's singleton; pieces >= 1 are
// ordered by increasing piece root).
struct RootIsolationResult {
  ClusterPartition partition;
  std::vector<std::uint32_t> origin_cluster;  // per output cluster (0-based bond id)
  std::vector<std::uint32_t> origin_piece;    // per output cluster
  bool first_cluster_intact = false;          // vertex 1 open: its cluster kept whole

  // Output-cluster index of piece (bond_cluster, piece), or -1 if absent.
  std::int64_t find_piece(std::uint32_t bond_cluster, std::uint32_t piece) const;
};

// Detach every bond-cluster root from its children, except the cluster
// containing vertex 1 which is isolated only when vertex 1 is closed.
// The result equals site_partition on the same inputs.
RootIsolationResult root_isolation(const RecursiveTree& tree, const SiteMarks& marks,
                                   const ClusterPartition& bond);

// Counts of clusters by size class. Class 0 counts closed vertices (site
// case); classes k >= 1 count open clusters of size k.
struct ClusterCensus {
  std::vector<std::uint64_t> counts;  // index k
  std::uint64_t n = 0;                // total vertices

  std::uint64_t count(std::size_t k) const { return k < counts.size() ? counts[k] : 0; }
  void add(std::size_t k, std::uint64_t c = 1);
  // counts(0) + sum_k k*counts(k); equals n for a valid census.
  std::uint64_t mass() const;
  bool operator==(const ClusterCensus& o) const;
};

ClusterCensus census(const ClusterPartition& partition);

// Census of size 1: the root is closed with probability 1-p, open with p.
ClusterCensus initial_census(double p, Rng& rng);

// One transition of the size-census Markov chain: with probability 1-p a
// closed vertex appears; with probability p*k*X(k)/n a size-k cluster grows
// (class 0 feeding class 1). In place; total mass becomes n+1.
void census_step(ClusterCensus& census, double p, Rng& rng);

// Cluster sizes sorted descending, scaled by the given factor.
std::vector<double> ranked_sizes(const ClusterPartition& partition, double scale = 1.0);

// CSV rows "k,count" (classes with nonzero count, ascending k).
std::string census_to_csv(const ClusterCensus& census);
// JSON {"cluster_of": [...], "roots": [...], "sizes": [...]}.
std::string partition_to_json(const ClusterPartition& partition);

}  // namespace rrt
