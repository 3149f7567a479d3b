#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace rrt::stats {

// Thread-safe log-Gamma (std::lgamma writes the global signgam on glibc).
double log_gamma(double x);
double log_beta(double a, double b);
double beta(double a, double b);

// Regularized incomplete gamma P(a,x) and its complement Q(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi2_sf(double x, double dof);

double normal_cdf(double x);
// Inverse of the standard normal CDF (Acklam's rational approximation,
// refined by one Halley step); |relative error| < 1e-12.
double normal_quantile(double q);

// Asymptotic complement of the Kolmogorov distribution, Q(lambda).
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;  // sup |F1 - F2|
  double p_value = 1.0;
  std::size_t n1 = 0, n2 = 0;  // n2 = 0 for one-sample tests
};

// One-sample KS against a CDF; sorts a copy of the sample.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);
// Two-sample KS.
KsResult ks_test(std::vector<double> a, std::vector<double> b);

struct Chi2Result {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t cells = 0;  // after pooling
};

// Goodness of fit of observed counts against fully specified cell
// probabilities. Cells with expected count < min_expected are pooled into
// the last cell before the statistic is formed.
Chi2Result chi2_gof(const std::vector<double>& observed,
                    const std::vector<double>& expected_prob,
                    double total, double min_expected = 5.0);

// Welford's online mean/variance accumulator.
class RunningStat {
 public:
  void push(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / double(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / double(n_ - 1) : 0.0; }
  double stddev() const;
  double std_error() const;
  void merge(const RunningStat& o);

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Empirical quantile (linear interpolation); sorts a copy.
double quantile(std::vector<double> v, double q);

}  // namespace rrt::stats
