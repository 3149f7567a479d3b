// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rrt/branching.hpp"
#include "rrt/experiments.hpp"
#include "rrt/limits.hpp"
#include "rrt/oracle.hpp"
#include "rrt/percolation.hpp"
#include "rrt/stats.hpp"
#include "rrt/tree.hpp"

using namespace rrt;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, double seconds) {
  std::printf("[%2d] %s %s [%.1fs]\n", id, pass ? "PASS" : "FAIL", what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    auto [ok, d] = fn();
    pass = ok;
    detail = d;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, pass, name + ": " + detail, secs);
}

unsigned workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

constexpr std::uint64_t kSeed = 20250810;

}  // namespace

int main() {
  std::printf("acceptance suite (seed %llu, %u workers)\n",
              (unsigned long long)kSeed, workers());

  // 1. Exact site-bond coupling, exhaustive for n <= 8.
  run(1, "exact coupling identity n<=8", [] {
    std::uint64_t instances = 0, failures = 0;
    for (Vertex n = 1; n <= 8; ++n) {
      auto rep = oracle::exact_coupling_check(n);
      instances += rep.instances;
      failures += rep.failures;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%llu instances, %llu failures",
                  (unsigned long long)instances, (unsigned long long)failures);
    return std::make_pair(failures == 0, std::string(buf));
  });

  // 2. Ewens exactness for k <= 7: rational equality and exact means.
  run(2, "ewens enumeration equals the closed form, k<=7", [] {
    bool ok = true;
    std::uint64_t support = 0;
    for (std::uint32_t k = 1; k <= 7 && ok; ++k) {
      auto dist = oracle::exact_ewens_distribution(k);
      support += dist.mass.size();
      ok = ok && dist.total() == Rational(1);
      std::int64_t kfact = 1;
      for (std::uint32_t i = 2; i <= k; ++i) kfact *= i;
      for (const auto& [a, mass] : dist.mass) {
        __int128 count = __int128(mass.num) * (kfact / mass.den);
        __int128 weight = 1;
        for (std::size_t j = 0; j < a.size(); ++j)
          for (std::uint32_t c = 1; c <= a[j]; ++c) weight *= __int128(j + 1) * c;
        ok = ok && count * weight == __int128(kfact);
      }
      for (std::uint32_t j = 1; j <= k; ++j) {
        Rational mean(0);
        for (const auto& [a, mass] : dist.mass)
          if (a[j - 1] > 0) mean = mean + mass * Rational(a[j - 1]);
        ok = ok && mean == Rational(1, j);
      }
    }
    return std::make_pair(ok, std::to_string(support) + " support points, rational equality");
  });

  // 3. Truncated eigenvector: dense solve vs closed form, h = 200.
  run(3, "eigenvector closed form to 1e-12, h=200", [] {
    double worst = 0.0;
    for (double p : {0.2, 0.5, 0.8}) {
      auto dense = solve_truncated_eigenvector_dense(p, 200);
      auto both = solve_truncated_eigenvector(p, 200);  // throws if routes differ
      (void)both;
      for (std::uint64_t k = 1; k <= 200; ++k) {
        double closed = yule_simon_pmf(p, k);
        worst = std::max(worst, std::fabs(dense[k] - closed) / closed);
      }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max rel residual %.2e", worst);
    return std::make_pair(worst < 1e-12, std::string(buf));
  });

  // 4. Beta-series identity residuals, j <= 50.
  run(4, "beta-series identity residual < 1e-10, j<=50", [] {
    double worst = 0.0;
    for (double p : {0.2, 0.5, 0.8})
      for (std::uint64_t j = 1; j <= 50; ++j)
        worst = std::max(worst, beta_series_identity_check(p, j));
    char buf[64];
    std::snprintf(buf, sizeof buf, "max residual %.2e", worst);
    return std::make_pair(worst < 1e-10, std::string(buf));
  });

  // 5. Yule-Simon proportions at p=0.6, n=1e6, 20 replicates.
  run(5, "proportions: 3-sigma bands k<=10 and slope within 0.15", [] {
    ExperimentConfig cfg;
    cfg.p = 0.6;
    cfg.n = 1000000;
    cfg.replicates = 20;
    cfg.seed = kSeed;
    cfg.workers = workers();
    auto res = run_proportions(cfg);
    double worst_z = 0.0;
    for (int k = 0; k <= 10; ++k)
      worst_z = std::max(worst_z, std::fabs(res.metrics.at("z_" + std::to_string(k))));
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |z| = %.2f, slope error %.3f", worst_z,
                  res.metrics.at("slope_abs_error"));
    return std::make_pair(worst_z <= 3.0 && res.metrics.at("slope_abs_error") <= 0.15,
                          std::string(buf));
  });

  // 6. Largest-cluster scaling at p=0.5 over n = 2^10..2^20.
  run(6, "largest-cluster growth exponent within 0.05 of p=0.5", [] {
    ExperimentConfig cfg;
    cfg.p = 0.5;
    cfg.replicates = 200;
    cfg.seed = kSeed;
    cfg.workers = workers();
    for (std::uint64_t e = 10; e <= 20; ++e) cfg.n_grid.push_back(std::uint64_t(1) << e);
    auto res = run_largest(cfg);
    char buf[64];
    std::snprintf(buf, sizeof buf, "slope %.4f", res.metrics.at("slope"));
    return std::make_pair(res.metrics.at("slope_abs_error") <= 0.05, std::string(buf));
  });

  // 7. Limit laws at n = 2^20: ML oracle pre-check plus three KS
  // comparisons at level 0.01 with Bonferroni, and the extended marginal
  // family from the limits-module invariants.
  run(7, "limit laws: ML oracle + W1, W2, W1*V11 KS at n=2^20", [] {
    ExperimentConfig cfg;
    cfg.p = 0.6;
    cfg.n = std::uint64_t(1) << 20;
    cfg.replicates = 10000;
    cfg.seed = kSeed;
    cfg.workers = workers();
    auto res = run_limit_laws(cfg);
    char buf[160];
    std::snprintf(buf, sizeof buf, "oracle p=%.3f, W1 p=%.3f, W2 p=%.3f, W1V11 p=%.3f",
                  res.metrics.at("ml_oracle_p_value"), res.metrics.at("ks_p_bond_W1"),
                  res.metrics.at("ks_p_bond_W2"), res.metrics.at("ks_p_site_W1V11"));
    bool pinned = res.metrics.at("pinned_pass") == 1.0;
    bool extended = res.all_pass;
    return std::make_pair(pinned && extended, std::string(buf));
  });

  // 8. Branching LLN: Exp(1) KS at t=12 and Malthusian slope.
  run(8, "branching: Exp(1) KS at t=12 and slope within 0.05 of 1", [] {
    ExperimentConfig cfg;
    cfg.p = 0.6;
    cfg.t_end = 12.0;
    cfg.replicates = 10000;
    cfg.seed = kSeed;
    cfg.workers = workers();
    auto res = run_branching(cfg);
    char buf[96];
    std::snprintf(buf, sizeof buf, "KS p=%.3f, slope %.4f",
                  res.metrics.at("exp1_ks_p_value"), res.metrics.at("malthusian_slope"));
    bool ok = res.metrics.at("exp1_ks_p_value") > 0.01 &&
              std::fabs(res.metrics.at("malthusian_slope") - 1.0) <= 0.05;
    return std::make_pair(ok, std::string(buf));
  });

  // 9. Census-chain equivalence: exact TV at n=4, Monte Carlo chi^2 at n=6.
  run(9, "census chain law: TV < 1e-12 at n=4, chi^2 at n=6", [] {
    Rational p(3, 5);
    auto chain = oracle::exact_chain_distribution(4, p).as_double();
    auto enumd = oracle::exact_census_distribution(4, p).as_double();
    double tv = oracle::total_variation(chain, enumd);

    const std::uint64_t draws = 500000;
    auto exact6 = oracle::exact_census_distribution(6, p).as_double();
    auto keys = run_replicates<oracle::CensusKey>(draws, workers(), [&](std::uint64_t r) {
      Rng rng = derive_stream(kSeed, "acceptance-chain", r);
      ClusterCensus c = initial_census(0.6, rng);
      while (c.n < 6) census_step(c, 0.6, rng);
      return oracle::census_key(c);
    });
    std::map<oracle::CensusKey, std::uint64_t> observed;
    for (const auto& k : keys) ++observed[k];
    std::vector<double> obs, probs;
    for (const auto& [key, prob] : exact6) {
      probs.push_back(prob);
      auto it = observed.find(key);
      obs.push_back(it == observed.end() ? 0.0 : double(it->second));
    }
    auto chi = stats::chi2_gof(obs, probs, double(draws));
    char buf[96];
    std::snprintf(buf, sizeof buf, "TV %.2e, chi2 p=%.3f", tv, chi.p_value);
    return std::make_pair(tv < 1e-12 && chi.p_value > 0.01, std::string(buf));
  });

  // 10. l^q facts on 1e4 random vector pairs.
  run(10, "l^q monotonicity and ranking nonexpansivity, 1e4 pairs", [] {
    Rng rng(kSeed);
    std::uint64_t violations = 0;
    for (int rep = 0; rep < 10000; ++rep) {
      std::size_t len = 1 + rng.bounded(16);
      std::vector<double> x(len), y(len);
      for (auto& v : x) v = rng.uniform01() * 10;
      for (auto& v : y) v = rng.uniform01() * 10;
      double n1 = lq_norm(x, 1), n2 = lq_norm(x, 2), ninf = lq_norm(x, INFINITY);
      if (n2 > n1 + 1e-12 || ninf > n2 + 1e-12 || ninf > n1 + 1e-12) ++violations;
      auto xd = rank_descending(x), yd = rank_descending(y);
      std::vector<double> dr(len), d(len);
      for (std::size_t i = 0; i < len; ++i) {
        dr[i] = xd[i] - yd[i];
        d[i] = x[i] - y[i];
      }
      for (double q : {1.0, 2.0, double(INFINITY)})
        if (lq_norm(dr, q) > lq_norm(d, q) + 1e-12) ++violations;
    }
    return std::make_pair(violations == 0,
                          std::to_string(violations) + " violations beyond 1e-12 slack");
  });

  std::printf("%s\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
  return g_failures == 0 ? 0 : 1;
}
