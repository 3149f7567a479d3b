#include "rrt/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rrt/stats.hpp"

namespace rrt {

using stats::log_beta;
using stats::log_gamma;

namespace {
void require_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("percolation parameter p must lie in (0,1)");
}
}  // namespace

LimitLaw::LimitLaw(double p_) : p(p_) { require_p(p_); }

double yule_simon_pmf(double p, std::uint64_t k) {
  require_p(p);
  if (k == 0) return 1.0 - p;
  return (1.0 - p) * std::exp(log_beta(1.0 + 1.0 / p, double(k)));
}

double bond_yule_simon_pmf(double p, std::uint64_t k) {
  require_p(p);
  if (k < 1) throw std::invalid_argument("bond_yule_simon_pmf: k must be >= 1");
  return (1.0 / p - 1.0) * std::exp(log_beta(1.0 + 1.0 / p, double(k)));
}

double yule_simon_tail_mass(double p, std::uint64_t K) {
  require_p(p);
  // k B(1+1/p, k) = (1/p) B(1/p, k+1); summing the Beta integral gives
  // sum_{k>K} = (1/p) B(1/p - 1, K+2).
  return (1.0 - p) / p * std::exp(log_beta(1.0 / p - 1.0, double(K) + 2.0));
}

double bond_tail_mass(double p, std::uint64_t K) {
  require_p(p);
  return (1.0 / p - 1.0) / p * std::exp(log_beta(1.0 / p - 1.0, double(K) + 2.0));
}

double beta_series_identity_check(double p, std::uint64_t j) {
  require_p(p);
  if (j < 1) throw std::invalid_argument("beta_series_identity_check: j must be >= 1");
  const double a = 1.0 + 1.0 / p;
  const std::uint64_t terms = 20000;
  // sum_{k>=j} B(a, k+1), terms advanced by the exact Beta recurrence.
  double term = std::exp(log_beta(a, double(j + 1)));
  double sum = 0.0;
  std::uint64_t k = j;
  for (std::uint64_t i = 0; i < terms; ++i, ++k) {
    sum += term;
    term *= double(k + 1) / (double(k + 2) + 1.0 / p);
  }
  // Remaining tail has the closed form B(1/p, K+1) by the same integral
  // manipulation that collapses the full series to B(1/p, j+1).
  sum += std::exp(log_beta(1.0 / p, double(k) + 1.0));
  double lhs = (1.0 / p - 1.0) * sum / double(j);
  double rhs = (1.0 - p) * std::exp(log_beta(a, double(j)));
  return std::fabs(lhs - rhs);
}

double ewens_pmf(std::uint64_t k, const std::vector<std::uint32_t>& a) {
  std::uint64_t mass = 0;
  for (std::size_t j = 0; j < a.size(); ++j) mass += (j + 1) * std::uint64_t(a[j]);
  if (mass != k) return 0.0;
  double log_p = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0) continue;
    log_p -= double(a[j]) * std::log(double(j + 1)) + log_gamma(double(a[j]) + 1.0);
  }
  return std::exp(log_p);
}

std::pair<double, double> ewens_moments(std::uint64_t k, std::uint64_t j) {
  if (j < 1 || j > k) throw std::invalid_argument("ewens_moments: j must lie in [1, k]");
  double mean = 1.0 / double(j);
  return {mean, mean + mean * mean};
}

double sample_one_sided_stable(double p, Rng& rng) {
  require_p(p);
  // Kanter's representation: with theta ~ U(0,pi) and E ~ Exp(1),
  //   A(theta) = sin(p theta)^{p/(1-p)} sin((1-p) theta) / sin(theta)^{1/(1-p)}
  // and S = (A/E)^{(1-p)/p} satisfies E[exp(-lambda S)] = exp(-lambda^p).
  double u = (double(rng() >> 11) + 0.5) * 0x1.0p-53;  // strictly inside (0,1)
  double theta = M_PI * u;
  double log_a = p / (1.0 - p) * std::log(std::sin(p * theta)) +
                 std::log(std::sin((1.0 - p) * theta)) -
                 1.0 / (1.0 - p) * std::log(std::sin(theta));
  double e = rng.exponential();
  return std::exp((1.0 - p) / p * (log_a - std::log(e)));
}

double sample_mittag_leffler(double p, Rng& rng) {
  return std::pow(sample_one_sided_stable(p, rng), -p);
}

double sample_limit_bond(double p, std::uint64_t i, Rng& rng) {
  require_p(p);
  if (i < 1) throw std::invalid_argument("sample_limit_bond: i must be >= 1");
  std::uint64_t sigma = 1;
  for (std::uint64_t j = 2; j <= i; ++j) sigma += rng.geometric(1.0 - p);
  double beta = rng.beta_1_b(double(sigma - 1));  // == 1 when sigma == 1
  return sample_mittag_leffler(p, rng) * std::pow(beta, p);
}

std::vector<double> sample_stick_breaking(Rng& rng, std::uint64_t j_max) {
  if (j_max < 1) throw std::invalid_argument("sample_stick_breaking: j_max must be >= 1");
  std::vector<double> v(j_max);
  double remaining = 1.0;
  for (std::uint64_t j = 0; j < j_max; ++j) {
    double u = rng.uniform01();
    v[j] = remaining * u;
    remaining *= 1.0 - u;
  }
  return v;
}

double sample_limit_site(double p, std::uint64_t i, std::uint64_t j, Rng& rng) {
  require_p(p);
  if (i < 1) throw std::invalid_argument("sample_limit_site: i must be >= 1");
  if (j == 0) return 0.0;
  double w = sample_limit_bond(p, i, rng);
  double v = sample_stick_breaking(rng, j).back();
  return w * v;
}

double lq_norm(const std::vector<double>& v, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x), q);
  return std::pow(s, 1.0 / q);
}

std::vector<double> rank_descending(std::vector<double> v) {
  for (double x : v)
    if (x < 0.0) throw std::invalid_argument("rank_descending: negative entry");
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

std::uint64_t sample_root_cluster_size(double p, std::uint64_t n, Rng& rng) {
  require_p(p);
  if (n < 1) throw std::invalid_argument("sample_root_cluster_size: n must be >= 1");
  const std::uint64_t direct_below = 64;
  std::uint64_t m = 1, c = 1;
  // Below the threshold, step vertex by vertex.
  while (m < n && m < direct_below) {
    if (rng.uniform01() < p * double(c) / double(m)) ++c;
    ++m;
  }
  // Above it, jump straight to the next join. The no-join survival from
  // total m to total J is Gamma(J-pc)Gamma(m) / (Gamma(m-pc)Gamma(J)), and
  // f(x) = lgamma(x-pc) - lgamma(x) is decreasing, so inversion of a
  // uniform draw locates the jump index exactly.
  while (m < n) {
    const double pc = p * double(c);
    auto f = [pc](double x) { return log_gamma(x - pc) - log_gamma(x); };
    const double fm = f(double(m));
    double log_u = std::log((double(rng() >> 11) + 0.5) * 0x1.0p-53);
    if (f(double(n)) - fm > log_u) {
      m = n;  // no further join up to the horizon
      break;
    }
    const double target = log_u + fm;
    // First-order guess from lgamma(x-pc)-lgamma(x) ~ -pc log(x-(1+pc)/2).
    const double alpha = 0.5 * (1.0 + pc);
    double guess = alpha + (double(m) - alpha) * std::exp(-log_u / pc);
    guess = std::min(guess, double(n));  // clamp before the integer cast
    std::uint64_t j = std::min<std::uint64_t>(
        n, std::max<std::uint64_t>(m + 1, std::uint64_t(guess)));
    int fixups = 0;
    while (f(double(j)) > target && j < n && fixups++ < 64) ++j;
    while (j > m + 1 && f(double(j - 1)) <= target && fixups++ < 64) --j;
    if (fixups >= 64) {  // approximation missed: fall back to bisection
      std::uint64_t lo = m + 1, hi = n;
      while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (f(double(mid)) <= target)
          hi = mid;
        else
          lo = mid + 1;
      }
      j = lo;
    }
    m = j;
    ++c;
  }
  return c;
}

double sample_scaled_root_cluster(double p, double t, Rng& rng) {
  require_p(p);
  if (!(t > 0.0)) throw std::invalid_argument("sample_scaled_root_cluster: t must be > 0");
  std::uint64_t n = rng.geometric(std::exp(-t));  // Yule population at time t
  std::uint64_t c = sample_root_cluster_size(p, n, rng);
  return std::pow(double(n), -p) * double(c);
}

std::string pmf_table_csv(double p, std::uint64_t k_max, bool bond) {
  require_p(p);
  std::string out = "k,pmf\n";
  char buf[64];
  for (std::uint64_t k = bond ? 1 : 0; k <= k_max; ++k) {
    double v = bond ? bond_yule_simon_pmf(p, k) : yule_simon_pmf(p, k);
    std::snprintf(buf, sizeof buf, "%llu,%.17g\n", (unsigned long long)k, v);
    out += buf;
  }
  return out;
}

double scaled_subtree_sup(const RecursiveTree& tree, const SiteMarks& marks,
                          Vertex i, double p) {
  require_p(p);
  if (!tree.has_birth_times())
    throw std::invalid_argument("scaled_subtree_sup: tree lacks birth times");
  if (i < 1 || i > tree.size()) throw std::invalid_argument("scaled_subtree_sup: bad vertex");
  // e^{-pt} decreases between births, so the supremum over the observed
  // horizon is attained immediately after a birth event.
  double sup = std::exp(-p * tree.birth_of(i));
  if (!marks.is_open(i)) return sup;  // the subtree stays a singleton
  std::vector<std::uint8_t> member(tree.size() + 1, 0);
  member[i] = 1;
  std::uint64_t size = 1;
  for (Vertex v = i + 1; v <= tree.size(); ++v) {
    if (marks.is_open(v) && member[tree.parent_of(v)]) {
      member[v] = 1;
      ++size;
      sup = std::max(sup, std::exp(-p * tree.birth_of(v)) * double(size));
    }
  }
  return sup;
}

}  // namespace rrt
