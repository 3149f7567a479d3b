#include "rrt/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace rrt::oracle {

namespace {

std::uint64_t factorial(std::uint64_t n) {
  std::uint64_t f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

std::int64_t ipow(std::int64_t base, unsigned exp) {
  std::int64_t r = 1;
  while (exp--) r *= base;
  return r;
}

// Site census of one (tree, mark) instance, computed by a direct pass that
// shares no code with the percolation module (this is the ground truth).
CensusKey site_census_key(const std::vector<Vertex>& parents, std::uint32_t mask,
                          Vertex n) {
  auto open = [&](Vertex v) { return (mask >> (v - 1)) & 1u; };
  std::array<std::uint32_t, 16> cid{}, csize{};
  std::uint32_t clusters = 0, closed = 0;
  for (Vertex v = 1; v <= n; ++v) {
    if (!open(v)) {
      ++closed;
      continue;
    }
    if (v >= 2 && open(parents[v - 2])) {
      std::uint32_t id = cid[parents[v - 2]];
      cid[v] = id;
      ++csize[id];
    } else {
      cid[v] = clusters;
      csize[clusters++] = 1;
    }
  }
  CensusKey key(1, closed);
  for (std::uint32_t i = 0; i < clusters; ++i) {
    if (csize[i] >= key.size()) key.resize(csize[i] + 1, 0);
    ++key[csize[i]];
  }
  while (key.size() > 1 && key.back() == 0) key.pop_back();
  return key;
}

void check_cap(Vertex n, Vertex cap, const char* what) {
  if (n < 1 || n > cap)
    throw std::invalid_argument(std::string(what) + ": n exceeds the enumeration cap");
}

}  // namespace

CensusKey census_key(const ClusterCensus& census) {
  CensusKey key(census.counts.begin(), census.counts.end());
  while (key.size() > 1 && key.back() == 0) key.pop_back();
  if (key.empty()) key.push_back(0);
  return key;
}

ExactDistribution<CensusKey> exact_census_distribution(Vertex n, const Rational& p,
                                                       Vertex cap) {
  check_cap(n, std::min<Vertex>(cap, kRationalCap), "exact_census_distribution");
  if (p.num <= 0 || p.num >= p.den)
    throw std::invalid_argument("exact_census_distribution: p must lie in (0,1)");
  const std::int64_t a = p.num, b = p.den;
  // Common denominator (n-1)! b^n; accumulate integer numerators.
  const std::int64_t denom = std::int64_t(factorial(n - 1)) * ipow(b, n);
  std::map<CensusKey, std::int64_t> numer;
  for_each_recursive_tree(n, [&](const std::vector<Vertex>& parents) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      int open = __builtin_popcount(mask);
      std::int64_t w = ipow(a, unsigned(open)) * ipow(b - a, unsigned(int(n) - open));
      numer[site_census_key(parents, mask, n)] += w;
    }
  });
  ExactDistribution<CensusKey> dist;
  for (const auto& [key, num] : numer) dist.mass[key] = Rational(num, denom);
  return dist;
}

std::map<CensusKey, double> exact_census_distribution_d(Vertex n, double p, Vertex cap) {
  check_cap(n, cap, "exact_census_distribution");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("exact_census_distribution: p must lie in (0,1)");
  const double tree_weight = 1.0 / double(factorial(n - 1));
  std::map<CensusKey, double> dist;
  for_each_recursive_tree(n, [&](const std::vector<Vertex>& parents) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      int open = __builtin_popcount(mask);
      double w = tree_weight * std::pow(p, open) * std::pow(1.0 - p, int(n) - open);
      dist[site_census_key(parents, mask, n)] += w;
    }
  });
  return dist;
}

ExactDistribution<CensusKey> exact_chain_distribution(Vertex n, const Rational& p,
                                                      Vertex cap) {
  check_cap(n, std::min<Vertex>(cap, kRationalCap), "exact_chain_distribution");
  if (p.num <= 0 || p.num >= p.den)
    throw std::invalid_argument("exact_chain_distribution: p must lie in (0,1)");
  const Rational q = Rational(p.den - p.num, p.den);  // 1 - p
  std::map<CensusKey, Rational> states;
  states[CensusKey{1}] = q;         // closed root
  states[CensusKey{0, 1}] = p;      // open root
  for (Vertex m = 1; m < n; ++m) {
    std::map<CensusKey, Rational> next;
    auto deposit = [&](const CensusKey& key, const Rational& mass) {
      auto [it, inserted] = next.try_emplace(key, mass);
      if (!inserted) it->second = it->second + mass;
    };
    for (const auto& [key, mass] : states) {
      // New closed vertex.
      {
        CensusKey k2 = key;
        k2[0] += 1;
        deposit(k2, mass * q);
      }
      // New open vertex next to a closed one.
      if (key[0] > 0) {
        CensusKey k2 = key;
        if (k2.size() < 2) k2.resize(2, 0);
        k2[1] += 1;
        deposit(k2, mass * p * Rational(key[0], std::int64_t(m)));
      }
      // A size-k cluster captures the new vertex.
      for (std::size_t k = 1; k < key.size(); ++k) {
        if (key[k] == 0) continue;
        CensusKey k2 = key;
        k2[k] -= 1;
        if (k2.size() < k + 2) k2.resize(k + 2, 0);
        k2[k + 1] += 1;
        while (k2.size() > 1 && k2.back() == 0) k2.pop_back();
        deposit(k2, mass * p * Rational(std::int64_t(k) * key[k], std::int64_t(m)));
      }
    }
    states = std::move(next);
  }
  ExactDistribution<CensusKey> dist;
  dist.mass = std::move(states);
  return dist;
}

std::vector<MultiplicityKey> multiplicity_vectors(std::uint32_t k) {
  std::vector<MultiplicityKey> out;
  MultiplicityKey current(k, 0);
  // Parts in decreasing order; a[j-1] counts parts of size j.
  std::function<void(std::uint32_t, std::uint32_t)> rec =
      [&](std::uint32_t remaining, std::uint32_t max_part) {
        if (remaining == 0) {
          out.push_back(current);
          return;
        }
        for (std::uint32_t j = std::min(remaining, max_part); j >= 1; --j) {
          current[j - 1] += 1;
          rec(remaining - j, j);
          current[j - 1] -= 1;
        }
      };
  rec(k, k);
  return out;
}

ExactDistribution<MultiplicityKey> exact_ewens_distribution(std::uint32_t k, Vertex cap) {
  check_cap(Vertex(k + 1), cap, "exact_ewens_distribution");
  const std::int64_t denom = std::int64_t(factorial(k));  // number of trees of size k+1
  std::map<MultiplicityKey, std::int64_t> counts;
  std::vector<std::uint32_t> subtree(k + 2);
  for_each_recursive_tree(Vertex(k + 1), [&](const std::vector<Vertex>& parents) {
    const Vertex n = Vertex(k + 1);
    std::fill(subtree.begin(), subtree.end(), 1u);
    for (Vertex v = n; v >= 2; --v) subtree[parents[v - 2]] += subtree[v];
    MultiplicityKey a(k, 0);
    for (Vertex v = 2; v <= n; ++v)
      if (parents[v - 2] == 1) ++a[subtree[v] - 1];
    ++counts[a];
  });
  ExactDistribution<MultiplicityKey> dist;
  for (const auto& [key, c] : counts) dist.mass[key] = Rational(c, denom);
  return dist;
}

CouplingReport exact_coupling_check(Vertex n, Vertex cap) {
  check_cap(n, cap, "exact_coupling_check");
  CouplingReport report;
  report.n = n;
  std::vector<std::uint8_t> open(n);
  for_each_recursive_tree(n, [&](const std::vector<Vertex>& parents) {
    RecursiveTree tree{std::vector<Vertex>(parents)};
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      for (Vertex v = 1; v <= n; ++v) open[v - 1] = (mask >> (v - 1)) & 1u;
      SiteMarks marks{std::vector<std::uint8_t>(open)};
      auto site = site_partition(tree, marks);
      auto bond = bond_partition(tree, marks);
      auto iso = root_isolation(tree, marks, bond);
      ++report.instances;
      bool equal = iso.partition.cluster_of == site.cluster_of &&
                   iso.partition.roots == site.roots && iso.partition.sizes == site.sizes;
      if (!equal) {
        ++report.failures;
        if (report.first_counterexample.empty()) {
          std::ostringstream os;
          os << "parents=(";
          for (std::size_t i = 0; i < parents.size(); ++i)
            os << (i ? "," : "") << parents[i];
          os << ") mask=" << mask;
          report.first_counterexample = os.str();
        }
      }
    }
  });
  return report;
}

std::string distribution_csv(const ExactDistribution<CensusKey>& dist) {
  std::ostringstream out;
  out << "observable_encoding,probability\n";
  char buf[40];
  for (const auto& [key, mass] : dist.mass) {
    for (std::size_t i = 0; i < key.size(); ++i) out << (i ? ":" : "") << key[i];
    std::snprintf(buf, sizeof buf, "%.17g", mass.to_double());
    out << "," << buf << "\n";
  }
  return out.str();
}

double total_variation(const std::map<CensusKey, double>& a,
                       const std::map<CensusKey, double>& b) {
  double tv = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      tv += std::fabs(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      tv += std::fabs(ib->second);
      ++ib;
    } else {
      tv += std::fabs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return tv / 2.0;
}

}  // namespace rrt::oracle
