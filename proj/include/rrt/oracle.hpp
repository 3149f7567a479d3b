#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rrt/percolation.hpp"
#include "rrt/rational.hpp"
#include "rrt/tree.hpp"

namespace rrt::oracle {

// Census encoded as its counts vector (index = size class, trailing zeros
// trimmed) so distributions over censuses can live in ordered maps.
using CensusKey = std::vector<std::uint32_t>;
CensusKey census_key(const ClusterCensus& census);

// Exact probability law over censuses (or multiplicity vectors). Rational
// mode keeps integer numerators over the common denominator (n-1)! * b^n.
template <class Key>
struct ExactDistribution {
  std::map<Key, Rational> mass;

  Rational total() const {
    Rational t(0);
    for (const auto& [k, m] : mass) t = t + m;
    return t;
  }
  std::map<Key, double> as_double() const {
    std::map<Key, double> d;
    for (const auto& [k, m] : mass) d[k] = m.to_double();
    return d;
  }
};

inline constexpr Vertex kRationalCap = 7;  // rational mode up to here
inline constexpr Vertex kOracleCap = 9;

// Law of the site census X_n: iterate all (n-1)! trees and 2^n mark
// patterns, weighting trees uniformly and marks by p^open (1-p)^closed.
ExactDistribution<CensusKey> exact_census_distribution(Vertex n, const Rational& p,
                                                       Vertex cap = kRationalCap);
std::map<CensusKey, double> exact_census_distribution_d(Vertex n, double p,
                                                        Vertex cap = kOracleCap);

// Law of X_n generated by the census transition chain instead; must agree
// with the enumeration law exactly.
ExactDistribution<CensusKey> exact_chain_distribution(Vertex n, const Rational& p,
                                                      Vertex cap = kRationalCap);

// Subtree-size multiplicity vectors after removing the root of a uniform
// recursive tree of size k+1: exact law over (a_1,...,a_k), each tree
// weighted 1/k!.
using MultiplicityKey = std::vector<std::uint32_t>;
ExactDistribution<MultiplicityKey> exact_ewens_distribution(std::uint32_t k,
                                                            Vertex cap = kRationalCap + 1);

// All integer partitions of k as multiplicity vectors (a_1..a_k).
std::vector<MultiplicityKey> multiplicity_vectors(std::uint32_t k);

struct CouplingReport {
  Vertex n = 0;
  std::uint64_t instances = 0;
  std::uint64_t failures = 0;
  std::string first_counterexample;  // empty when all instances agree
  bool ok() const { return failures == 0; }
};

// For every recursive tree of size n and every mark pattern, check that
// root-isolation of the bond partition reproduces the site partition.
CouplingReport exact_coupling_check(Vertex n, Vertex cap = kOracleCap);

// Total-variation distance between two distributions over the same keys.
double total_variation(const std::map<CensusKey, double>& a,
                       const std::map<CensusKey, double>& b);

// CSV "observable_encoding,probability"; keys encoded as ':'-joined counts.
std::string distribution_csv(const ExactDistribution<CensusKey>& dist);

}  // namespace rrt::oracle
