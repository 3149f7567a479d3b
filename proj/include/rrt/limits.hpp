#pragma once

#include <cstdint>
#include <vector>

#include "rrt/percolation.hpp"
#include "rrt/rng.hpp"
#include "rrt/tree.hpp"

namespace rrt {

// Closed-form constants of the limit laws for percolation parameter p.
struct LimitLaw {
  double p;
  explicit LimitLaw(double p_);
  double c_p() const { return 1.0 - p; }
  double c_tilde_p() const { return 1.0 / p - 1.0; }
};

// Site limit proportions: nu_p(0) = 1-p, nu_p(k) = (1-p) B(1+1/p, k).
// Evaluated via log-Gamma so k up to 1e6 stays stable.
double yule_simon_pmf(double p, std::uint64_t k);

// Bond limit proportions: (1/p - 1) B(1+1/p, k), k >= 1.
double bond_yule_simon_pmf(double p, std::uint64_t k);

// Exact tail of the vertex-mass series: sum_{k>K} k nu_p(k). The Beta
// integral collapses the tail to (1-p)(1/p) B(1/p - 1, K+2).
double yule_simon_tail_mass(double p, std::uint64_t K);
// Same for the bond series: sum_{k>K} k * bond_yule_simon_pmf(k).
double bond_tail_mass(double p, std::uint64_t K);

// |c~_p sum_{k>=j} B(1+1/p, k+1)/j - c_p B(1+1/p, j)|, the series summed to
// a truncation point and completed with its closed-form tail.
double beta_series_identity_check(double p, std::uint64_t j);

// Multiplicity-vector probability of the subtree sizes after removing the
// root of a uniform recursive tree: prod_j 1/(j^{a_j} a_j!) when
// sum j*a_j = k, else 0. a[j-1] holds the multiplicity of size j.
double ewens_pmf(std::uint64_t k, const std::vector<std::uint32_t>& a);

// (mean, second moment) of the number of size-j subtrees: (1/j, 1/j + 1/j^2).
std::pair<double, double> ewens_moments(std::uint64_t k, std::uint64_t j);

// One-sided p-stable variable with Laplace transform exp(-lambda^p)
// (Kanter's representation: one uniform angle, one exponential).
double sample_one_sided_stable(double p, Rng& rng);

// Mittag-Leffler(p): S^{-p} for the stable S above.
double sample_mittag_leffler(double p, Rng& rng);

// Marginal of the scaled bond-cluster limit W~_i: a Mittag-Leffler factor
// times beta_{sigma_i}^p, where sigma_1 = 1 and sigma_i grows by geometric
// increments with success 1-p, and beta_k ~ Beta(1, k-1) (Beta(1,0) == 1).
double sample_limit_bond(double p, std::uint64_t i, Rng& rng);

// Uniform stick-breaking: V_j = U_j prod_{l<j} (1-U_l), j = 1..j_max.
std::vector<double> sample_stick_breaking(Rng& rng, std::uint64_t j_max);

// Marginal of the scaled site-piece limit W~_i V_{i,j}; j = 0 yields 0.
double sample_limit_site(double p, std::uint64_t i, std::uint64_t j, Rng& rng);

// l^q norm; q = infinity gives the max of absolute values.
double lq_norm(const std::vector<double>& v, double q);

// Entries sorted in decreasing order; rejects negative entries.
std::vector<double> rank_descending(std::vector<double> v);

// Yule-martingale oracle for the Mittag-Leffler law. The root cluster of
// the embedded rate-1 Yule tree grows at rate p, and jointly with the total
// population N_t the scaled size N_t^{-p} G_t tends to ML(p). N_t at fixed
// t is geometric; given N_t = n the cluster size is the birth-order chain
// below, so the oracle never touches the stable sampler.
double sample_scaled_root_cluster(double p, double t, Rng& rng);

// Size of the root-connected bond cluster after n birth events: the chain
// c -> c+1 with probability p*c/m at total size m, started from c = 1.
// Jump indices are inverted exactly through the Gamma-ratio survival
// function, so the cost is proportional to the number of jumps (~n^p).
std::uint64_t sample_root_cluster_size(double p, std::uint64_t n, Rng& rng);

// Optional tail diagnostic: sup over birth events of e^{-p b(v)} times the
// size of the site subtree rooted at i. Requires birth times.
double scaled_subtree_sup(const RecursiveTree& tree, const SiteMarks& marks,
                          Vertex i, double p);

// CSV "k,pmf" table of the site law (k from 0) or the bond law (k from 1).
std::string pmf_table_csv(double p, std::uint64_t k_max, bool bond = false);

}  // namespace rrt
