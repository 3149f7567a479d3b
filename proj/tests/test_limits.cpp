#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "rrt/limits.hpp"
#include "rrt/stats.hpp"

using namespace rrt;

TEST_CASE("yule-simon pmf closed values") {
  CHECK(yule_simon_pmf(0.3, 0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(yule_simon_pmf(0.8, 0) == doctest::Approx(0.2).epsilon(1e-14));
  // p = 1/2: nu(1) = 0.5 B(3,1) = 1/6.
  CHECK(yule_simon_pmf(0.5, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  // p = 1/2: nu(k) = 1/(k(k+1)(k+2)).
  CHECK(yule_simon_pmf(0.5, 10) == doctest::Approx(1.0 / (10 * 11 * 12)).epsilon(1e-12));
  CHECK_THROWS_AS(yule_simon_pmf(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(yule_simon_pmf(1.0, 1), std::invalid_argument);
}

TEST_CASE("pmf ratio identity k/(k+1+1/p)") {
  for (double p : {0.2, 0.5, 0.8}) {
    for (std::uint64_t k : {1ull, 2ull, 7ull, 50ull, 1000ull}) {
      double ratio = yule_simon_pmf(p, k + 1) / yule_simon_pmf(p, k);
      CHECK(ratio == doctest::Approx(double(k) / (double(k) + 1.0 + 1.0 / p)).epsilon(1e-9));
    }
  }
}

TEST_CASE("bond pmf values and monotonicity") {
  // p = 1/2, k = 1: c~_p B(3,1) = 1 * 1/3.
  CHECK(bond_yule_simon_pmf(0.5, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  for (double p : {0.3, 0.6}) {
    double prev = bond_yule_simon_pmf(p, 1);
    for (std::uint64_t k = 2; k <= 200; ++k) {
      double cur = bond_yule_simon_pmf(p, k);
      CHECK(cur < prev);
      prev = cur;
    }
  }
  CHECK_THROWS_AS(bond_yule_simon_pmf(0.5, 0), std::invalid_argument);
}

TEST_CASE("vertex-mass identities with exact tails") {
  // <nu_p, x v 1> = 1 and sum_k k nu_p(k) = p; partial sums to K = 1e4 are
  // completed by the closed-form Beta tail.
  for (double p : {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const std::uint64_t K = 10000;
    double open_mass = 0.0;
    for (std::uint64_t k = 1; k <= K; ++k) open_mass += double(k) * yule_simon_pmf(p, k);
    open_mass += yule_simon_tail_mass(p, K);
    CHECK(std::fabs(open_mass - p) < 1e-10);
    CHECK(std::fabs(yule_simon_pmf(p, 0) + open_mass - 1.0) < 1e-10);

    // All bond mass lies in open clusters: sum_k k c~_p B(1+1/p,k) = 1.
    double bond_mass = 0.0;
    for (std::uint64_t k = 1; k <= K; ++k) bond_mass += double(k) * bond_yule_simon_pmf(p, k);
    bond_mass += bond_tail_mass(p, K);
    CHECK(std::fabs(bond_mass - 1.0) < 1e-10);
  }
}

TEST_CASE("power-law slope of the pmf") {
  // log-log slope over k in [1e2, 1e4] approaches -(1+1/p).
  for (double p : {0.5, 0.6, 0.8}) {
    std::vector<double> xs, ys;
    for (double lk = std::log(100.0); lk <= std::log(10000.0) + 1e-9;
         lk += (std::log(10000.0) - std::log(100.0)) / 40.0) {
      std::uint64_t k = std::uint64_t(std::round(std::exp(lk)));
      xs.push_back(std::log(double(k)));
      ys.push_back(std::log(yule_simon_pmf(p, k)));
    }
    double slope = stats::linear_fit(xs, ys).slope;
    CHECK(std::fabs(slope + 1.0 + 1.0 / p) < 0.02);
  }
}

TEST_CASE("beta series identity") {
  // p = 1/2, j = 1: both sides equal 1/6.
  const double lhs_ref = 1.0 / 6.0;
  CHECK(0.5 * std::exp(stats::log_beta(3.0, 1.0)) == doctest::Approx(lhs_ref).epsilon(1e-12));
  CHECK(beta_series_identity_check(0.5, 1) < 1e-12);
  for (double p : {0.2, 0.5, 0.8})
    for (std::uint64_t j = 1; j <= 50; ++j) CHECK(beta_series_identity_check(p, j) < 1e-10);
}

TEST_CASE("gamma identity in log space") {
  // Gamma(1/p) Gamma(j+1) = p j Gamma(1+1/p) Gamma(j).
  for (double p : {0.2, 0.5, 0.8})
    for (std::uint64_t j : {1ull, 5ull, 33ull, 500ull}) {
      double lhs = stats::log_gamma(1.0 / p) + stats::log_gamma(double(j) + 1.0);
      double rhs = std::log(p * double(j)) + stats::log_gamma(1.0 + 1.0 / p) +
                   stats::log_gamma(double(j));
      CHECK(std::fabs(lhs - rhs) < 1e-12 * std::max(1.0, std::fabs(lhs)));
    }
}

TEST_CASE("ewens pmf values") {
  CHECK(ewens_pmf(2, {2, 0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ewens_pmf(2, {0, 1}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ewens_pmf(1, {1}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ewens_pmf(3, {1, 1, 0}) == doctest::Approx(0.5).epsilon(1e-14));
  // Mass constraint violated: probability 0.
  CHECK(ewens_pmf(3, {1, 0, 0}) == 0.0);
  CHECK(ewens_moments(4, 2).first == doctest::Approx(0.5));
  CHECK(ewens_moments(4, 2).second == doctest::Approx(0.75));
  CHECK_THROWS_AS(ewens_moments(4, 5), std::invalid_argument);
  CHECK_THROWS_AS(ewens_moments(4, 0), std::invalid_argument);
}

TEST_CASE("ewens pmf sums to one over integer partitions") {
  // Against the partition enumeration for k <= 12.
  for (std::uint32_t k = 1; k <= 12; ++k) {
    double total = 0.0;
    // Enumerate multiplicity vectors with sum j a_j = k.
    std::vector<std::uint32_t> a(k, 0);
    std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t rem,
                                                                std::uint32_t maxp) {
      if (rem == 0) {
        total += ewens_pmf(k, a);
        return;
      }
      for (std::uint32_t j = std::min(rem, maxp); j >= 1; --j) {
        a[j - 1] += 1;
        rec(rem - j, j);
        a[j - 1] -= 1;
      }
    };
    rec(k, k);
    CHECK(std::fabs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("stick breaking: telescoping identity and moments") {
  Rng rng(11);
  const int reps = 100000;
  stats::RunningStat v1, v2;
  for (int i = 0; i < reps; ++i) {
    auto v = sample_stick_breaking(rng, 2);
    v1.push(v[0]);
    v2.push(v[1]);
    CHECK(v[0] >= 0.0);
    CHECK(v[0] + v[1] <= 1.0 + 1e-15);
  }
  CHECK(std::fabs(v1.mean() - 0.5) <= 3 * v1.std_error());
  CHECK(std::fabs(v2.mean() - 0.25) <= 3 * v2.std_error());

  // Partial sums telescope exactly per sample: replay the uniforms.
  Rng ra(12), rb(12);
  auto v = sample_stick_breaking(ra, 6);
  double sum = 0.0, prod = 1.0;
  for (int j = 0; j < 6; ++j) {
    double u = rb.uniform01();
    sum += v[j];
    prod *= 1.0 - u;
    CHECK(sum == doctest::Approx(1.0 - prod).epsilon(1e-12));
  }
}

TEST_CASE("mittag-leffler sampler against the yule-martingale oracle") {
  const double p = 0.5;
  Rng rng(13);
  const int n_sampler = 100000, n_oracle = 4000;
  std::vector<double> ml(n_sampler), oracle(n_oracle);
  for (auto& x : ml) {
    x = sample_mittag_leffler(p, rng);
    CHECK(x > 0.0);
  }
  for (auto& x : oracle) x = sample_scaled_root_cluster(p, 14.0, rng);

  stats::RunningStat ms, os;
  for (double x : ml) ms.push(x);
  for (double x : oracle) os.push(x);
  double band = 3 * std::sqrt(ms.std_error() * ms.std_error() + os.std_error() * os.std_error());
  CHECK(std::fabs(ms.mean() - os.mean()) <= band);

  auto ks = stats::ks_test(ml, oracle);
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("root cluster chain matches direct stepping in distribution") {
  // The accelerated jump inversion must reproduce the plain Bernoulli chain.
  const double p = 0.6;
  const std::uint64_t n = 4096;
  Rng rng(14);
  const int reps = 20000;
  std::vector<double> fast(reps), slow(reps);
  for (auto& x : fast) x = double(sample_root_cluster_size(p, n, rng));
  for (auto& x : slow) {
    std::uint64_t c = 1;
    for (std::uint64_t m = 1; m < n; ++m)
      if (rng.uniform01() < p * double(c) / double(m)) ++c;
    x = double(c);
  }
  CHECK(stats::ks_test(fast, slow).p_value > 0.01);
}

TEST_CASE("limit bond sampler structure") {
  const double p = 0.6;
  // sigma_2 - 1 is geometric with success 1-p on {1,2,...}.
  Rng rng(15);
  const int reps = 200000;
  stats::RunningStat g;
  for (int i = 0; i < reps; ++i) g.push(double(rng.geometric(1.0 - p)));
  CHECK(std::fabs(g.mean() - 1.0 / (1.0 - p)) <= 3 * g.std_error());

  // i = 1 reduces to the pure Mittag-Leffler draw: identical streams agree.
  Rng ra(16), rb(16);
  for (int i = 0; i < 100; ++i) {
    double a = sample_limit_bond(p, 1, ra);
    double b = sample_mittag_leffler(p, rb);
    CHECK(a == doctest::Approx(b).epsilon(1e-15));
  }

  // Samples are positive and stochastically smaller for larger i.
  stats::RunningStat w1, w3;
  Rng rc(17);
  for (int i = 0; i < 20000; ++i) {
    double a = sample_limit_bond(p, 1, rc);
    double b = sample_limit_bond(p, 3, rc);
    CHECK(a > 0.0);
    CHECK(b > 0.0);
    w1.push(a);
    w3.push(b);
  }
  CHECK(w1.mean() > w3.mean());
}

TEST_CASE("limit site sampler") {
  Rng rng(18);
  CHECK(sample_limit_site(0.5, 1, 0, rng) == 0.0);
  for (int i = 0; i < 1000; ++i) CHECK(sample_limit_site(0.5, 2, 2, rng) >= 0.0);
  CHECK_THROWS_AS(sample_limit_site(0.5, 0, 1, rng), std::invalid_argument);
}

TEST_CASE("lq norms") {
  CHECK(lq_norm({3, 4}, 2) == doctest::Approx(5.0));
  CHECK(lq_norm({1, -7, 3}, INFINITY) == doctest::Approx(7.0));
  CHECK(lq_norm({1, 1, 1, 1}, 1) == doctest::Approx(4.0));
  CHECK_THROWS_AS(lq_norm({1.0}, 0.5), std::invalid_argument);

  // Monotonicity in q on random nonnegative vectors.
  Rng rng(19);
  for (int rep = 0; rep < 10000; ++rep) {
    std::size_t len = 1 + rng.bounded(12);
    std::vector<double> v(len);
    for (auto& x : v) x = rng.uniform01() * 5;
    double n1 = lq_norm(v, 1), n2 = lq_norm(v, 2), ninf = lq_norm(v, INFINITY);
    CHECK(n2 <= n1 + 1e-12);
    CHECK(ninf <= n2 + 1e-12);
  }
}

TEST_CASE("ranking: examples, idempotence, nonexpansivity") {
  CHECK(rank_descending({1, 3, 2}) == std::vector<double>{3, 2, 1});
  CHECK_THROWS_AS(rank_descending({1, -1}), std::invalid_argument);

  Rng rng(20);
  for (int rep = 0; rep < 10000; ++rep) {
    std::size_t len = 1 + rng.bounded(10);
    std::vector<double> x(len), y(len);
    for (auto& v : x) v = rng.uniform01() * 4;
    for (auto& v : y) v = rng.uniform01() * 4;
    auto xd = rank_descending(x), yd = rank_descending(y);
    CHECK(rank_descending(xd) == xd);
    std::vector<double> dr(len), d(len);
    for (std::size_t i = 0; i < len; ++i) {
      dr[i] = xd[i] - yd[i];
      d[i] = x[i] - y[i];
    }
    for (double q : {1.0, 2.0, double(INFINITY)})
      CHECK(lq_norm(dr, q) <= lq_norm(d, q) + 1e-12);
  }
}

TEST_CASE("pmf table csv") {
  auto site = pmf_table_csv(0.5, 2);
  CHECK(site == "k,pmf\n0,0.5\n1,0.16666666666666669\n2,0.041666666666666664\n");
  auto bond = pmf_table_csv(0.5, 1, true);
  CHECK(bond.rfind("k,pmf\n1,", 0) == 0);
  CHECK(bond.find("0,") != 6);  // bond table starts at k = 1
}

TEST_CASE("scaled subtree diagnostic") {
  Rng rng(21);
  auto t = grow_yule(500, rng);
  auto m = mark_sites(t, 0.5, rng);
  for (Vertex i : {Vertex(1), Vertex(2), Vertex(10)}) {
    double s = scaled_subtree_sup(t, m, i, 0.5);
    CHECK(s > 0.0);
    CHECK(s >= std::exp(-0.5 * t.birth_of(i)) - 1e-15);
  }
  auto plain = grow_uniform(10, rng);
  CHECK_THROWS_AS(scaled_subtree_sup(plain, m, 1, 0.5), std::invalid_argument);
}
