#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rrt/rng.hpp"
#include "rrt/stats.hpp"

using namespace rrt;

TEST_CASE("log_gamma matches known values") {
  CHECK(stats::log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(stats::log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK(stats::beta(3.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(stats::beta(2.5, 1.5) ==
        doctest::Approx(std::exp(std::lgamma(2.5) + std::lgamma(1.5) - std::lgamma(4.0)))
            .epsilon(1e-13));
}

TEST_CASE("incomplete gamma agrees with closed forms") {
  // P(1, x) = 1 - e^{-x}
  for (double x : {0.1, 1.0, 3.5, 10.0})
    CHECK(stats::gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  // chi^2 with 2 dof: sf(x) = e^{-x/2}
  for (double x : {0.5, 2.0, 9.0})
    CHECK(stats::chi2_sf(x, 2.0) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-12));
  CHECK(stats::gamma_p(0.5, 1e8) == doctest::Approx(1.0));
}

TEST_CASE("normal quantile inverts the cdf") {
  for (double q : {0.001, 0.01, 0.2, 0.5, 0.77, 0.995})
    CHECK(stats::normal_cdf(stats::normal_quantile(q)) == doctest::Approx(q).epsilon(1e-10));
  CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
}

TEST_CASE("kolmogorov tail values") {
  // Q(0.82757) ~ 0.5 (median of the Kolmogorov distribution)
  CHECK(stats::kolmogorov_q(0.82757) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(stats::kolmogorov_q(2.0) < 1e-3);
  CHECK(stats::kolmogorov_q(0.2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ks test accepts its own distribution and rejects a wrong one") {
  Rng rng(12345);
  std::vector<double> sample(20000);
  for (auto& x : sample) x = rng.exponential();
  auto exp_cdf = [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); };
  auto ok = stats::ks_test(sample, exp_cdf);
  CHECK(ok.p_value > 0.01);
  auto bad = stats::ks_test(sample, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-1.3 * x); });
  CHECK(bad.p_value < 1e-6);
}

TEST_CASE("two-sample ks on identical laws") {
  Rng rng(777);
  std::vector<double> a(5000), b(8000);
  for (auto& x : a) x = rng.uniform01();
  for (auto& x : b) x = rng.uniform01();
  CHECK(stats::ks_test(a, b).p_value > 0.01);
}

TEST_CASE("chi2 gof detects uniform vs biased dice") {
  Rng rng(99);
  std::vector<double> counts(6, 0.0);
  const int rolls = 60000;
  for (int i = 0; i < rolls; ++i) counts[rng.bounded(6)] += 1;
  std::vector<double> fair(6, 1.0 / 6.0);
  CHECK(stats::chi2_gof(counts, fair, rolls).p_value > 0.01);
  std::vector<double> biased = {0.2, 0.2, 0.2, 0.2, 0.1, 0.1};
  CHECK(stats::chi2_gof(counts, biased, rolls).p_value < 1e-9);
}

TEST_CASE("running stat merge equals pooled accumulation") {
  Rng rng(5);
  stats::RunningStat a, b, all;
  for (int i = 0; i < 1000; ++i) {
    double x = rng.uniform01() * 3 - 1;
    (i % 2 ? a : b).push(x);
    all.push(x);
  }
  a.merge(b);
  CHECK(a.count() == all.count());
  CHECK(a.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
  CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-10));
}

TEST_CASE("linear fit recovers an exact line") {
  std::vector<double> x = {1, 2, 3, 4, 5}, y;
  for (double v : x) y.push_back(2.5 * v - 1.0);
  auto fit = stats::linear_fit(x, y);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("rng bounded draws are unbiased across the range") {
  Rng rng(31337);
  std::vector<double> counts(7, 0.0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) counts[rng.bounded(7)] += 1;
  std::vector<double> uniform(7, 1.0 / 7.0);
  CHECK(stats::chi2_gof(counts, uniform, draws).p_value > 0.01);
}

TEST_CASE("derived streams are reproducible and distinct") {
  auto a1 = derive_stream(42, "exp", 7);
  auto a2 = derive_stream(42, "exp", 7);
  auto b = derive_stream(42, "exp", 8);
  auto c = derive_stream(42, "other", 7);
  CHECK(a1() == a2());
  CHECK(a1() != b());
  CHECK(a1() != c());
}
