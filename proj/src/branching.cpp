#include "rrt/branching.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rrt/stats.hpp"

namespace rrt {

namespace {

// Fenwick tree over per-class aggregate rates. Rates are integers (class k
// rings at rate k per cluster), so prefix search on an integer draw picks an
// event class without floating-point edge cases.
class RateTable {
 public:
  explicit RateTable(std::size_t classes) { reset(classes); }

  void reset(std::size_t classes) {
    size_ = 1;
    while (size_ < classes) size_ <<= 1;
    tree_.assign(size_ + 1, 0);
    total_ = 0;
  }

  std::size_t capacity() const { return size_; }

  void add(std::size_t cls, std::int64_t delta) {
    if (cls >= size_) grow(cls + 1);
    total_ = std::uint64_t(std::int64_t(total_) + delta);
    for (std::size_t i = cls + 1; i <= size_; i += i & (~i + 1))
      tree_[i] = std::uint64_t(std::int64_t(tree_[i]) + delta);
  }

  std::uint64_t total() const { return total_; }

  // Largest-prefix descent: returns the class owning the u-th unit of rate.
  std::size_t pick(std::uint64_t u) const {
    std::size_t pos = 0;
    for (std::size_t step = size_; step > 0; step >>= 1) {
      std::size_t next = pos + step;
      if (next <= size_ && tree_[next] <= u) {
        u -= tree_[next];
        pos = next;
      }
    }
    return pos;  // 0-based class index
  }

 private:
  void grow(std::size_t needed) {
    std::vector<std::uint64_t> rates(size_, 0);
    for (std::size_t c = 0; c < size_; ++c) rates[c] = rate_of(c);
    std::size_t new_size = size_;
    while (new_size < needed) new_size <<= 1;
    tree_.assign(new_size + 1, 0);
    std::size_t old = size_;
    size_ = new_size;
    std::uint64_t saved_total = total_;
    for (std::size_t c = 0; c < old; ++c)
      if (rates[c]) add(c, std::int64_t(rates[c]));
    total_ = saved_total;
  }

  std::uint64_t rate_of(std::size_t cls) const {
    std::uint64_t sum = 0;
    for (std::size_t i = cls + 1; i > 0; i -= i & (~i + 1)) sum += tree_[i];
    std::uint64_t prev = 0;
    for (std::size_t i = cls; i > 0; i -= i & (~i + 1)) prev += tree_[i];
    return sum - prev;
  }

  std::vector<std::uint64_t> tree_;
  std::size_t size_ = 0;
  std::uint64_t total_ = 0;
};

Trajectory run_simulation(double p, std::int64_t h, const SimulateOptions& opt, Rng& rng) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("simulate_Z: p must lie in (0,1)");
  const bool has_t_end = !std::isnan(opt.t_end);
  if (!has_t_end && opt.n_end == 0)
    throw std::invalid_argument("simulate_Z: need t_end or n_end");
  const bool truncated = h >= 0;
  const std::size_t over_cls = truncated ? std::size_t(h) + 1 : 0;

  BranchingState st;
  st.h = h;
  st.census.n = 0;
  RateTable rates(truncated ? over_cls + 1 : 64);

  auto add_class = [&](std::size_t k, std::uint64_t count, std::int64_t rate_per) {
    st.census.add(k, count);
    rates.add(k, std::int64_t(count) * rate_per);
  };

  // One initial individual: type 0 with probability 1-p, else type 1
  // (which for h = 0 is already the over-weight class).
  if (rng.bernoulli(p)) {
    if (truncated && over_cls == 1) {
      st.overweight = 1;
      rates.add(over_cls, 1);
    } else {
      add_class(1, 1, 1);
    }
  } else {
    add_class(0, 1, 1);
  }
  st.census.n = 1;

  Trajectory traj;
  double next_sample = opt.sample_dt > 0 ? opt.sample_dt : std::numeric_limits<double>::infinity();
  std::uint64_t n_total = 1;

  auto flush_samples = [&](double upto) {
    while (next_sample <= upto) {
      traj.samples.push_back({next_sample, n_total});
      if (opt.record_census) {
        ClusterCensus snap = st.census;
        snap.n = n_total;
        traj.census_samples.emplace_back(next_sample, std::move(snap));
      }
      next_sample += opt.sample_dt;
    }
  };

  double t = 0.0;
  while (true) {
    if (opt.n_end > 0 && n_total >= opt.n_end) break;
    std::uint64_t total_rate = rates.total();
    if (total_rate != n_total)  // every vertex rings at rate 1
      throw std::logic_error("simulate_Z: event-rate bookkeeping broke");
    double dt = rng.exponential(double(total_rate));
    if (has_t_end && t + dt > opt.t_end) {
      t = opt.t_end;
      break;
    }
    t += dt;
    flush_samples(t);

    std::size_t cls = rates.pick(rng.bounded(total_rate));
    bool open_event = rng.bernoulli(p);
    if (truncated && cls == over_cls) {
      if (open_event) {
        st.overweight += 1;
        rates.add(over_cls, 1);
      } else {
        add_class(0, 1, 1);
      }
    } else if (cls == 0) {
      if (open_event) {
        if (truncated && over_cls == 1) {
          st.overweight += 1;
          rates.add(over_cls, 1);
        } else {
          add_class(1, 1, 1);
        }
      } else {
        add_class(0, 1, 1);
      }
    } else {
      if (open_event) {
        // The cluster advances one size class.
        st.census.counts[cls] -= 1;
        rates.add(cls, -std::int64_t(cls));
        if (truncated && cls == std::size_t(h)) {
          st.overweight += std::uint64_t(h) + 1;
          rates.add(over_cls, std::int64_t(h) + 1);
        } else {
          if (!truncated && cls + 1 >= opt.class_cap)
            throw std::runtime_error("simulate_Z: class index exceeded the configured cap");
          add_class(cls + 1, 1, std::int64_t(cls) + 1);
        }
      } else {
        add_class(0, 1, 1);
      }
    }
    n_total += 1;
    st.census.n += 1;
    ++traj.events;
  }

  flush_samples(t);
  traj.samples.push_back({t, n_total});
  st.t = t;
  if (st.total_vertices() != n_total)
    throw std::logic_error("simulate_Z: vertex accounting broke");
  traj.final_state = std::move(st);
  return traj;
}

}  // namespace

Trajectory simulate_Z(double p, const SimulateOptions& opt, Rng& rng) {
  return run_simulation(p, -1, opt, rng);
}

Trajectory simulate_Z_truncated(double p, std::uint64_t h, const SimulateOptions& opt,
                                Rng& rng) {
  return run_simulation(p, std::int64_t(h), opt, rng);
}

std::vector<double> solve_truncated_eigenvector_dense(double p, std::uint64_t h) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("eigenvector: p must lie in (0,1)");
  const std::size_t dim = h + 2;
  // Unknowns nu(0..h+1); equations: normalization nu(0) = 1-p, the rows for
  // coordinates 1..h, and the over-weight row for coordinate h+1.
  std::vector<std::vector<double>> m(dim, std::vector<double>(dim + 1, 0.0));
  m[0][0] = 1.0;
  m[0][dim] = 1.0 - p;
  for (std::size_t k = 1; k <= h; ++k) {
    // nu(k) = p((k-1) nu(k-1) - k nu(k)), with the k = 1 inflow being
    // p nu(0) because type 0 produces type 1 at rate p.
    m[k][k] = 1.0 + p * double(k);
    m[k][k - 1] = -p * (k == 1 ? 1.0 : double(k - 1));
  }
  if (h == 0) {
    // Over-weight row: type 0 feeds the over-weight class directly.
    m[1][1] = 1.0 - p;
    m[1][0] = -p;
  } else {
    m[h + 1][h + 1] = 1.0 - p;
    m[h + 1][h] = -p * double(h) * double(h + 1);
  }

  // Gaussian elimination with partial pivoting.
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < dim; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) throw std::runtime_error("eigenvector: singular system");
    std::swap(m[col], m[piv]);
    for (std::size_t r = 0; r < dim; ++r) {
      if (r == col || m[r][col] == 0.0) continue;
      double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= dim; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::vector<double> nu(dim);
  for (std::size_t i = 0; i < dim; ++i) nu[i] = m[i][dim] / m[i][i];
  return nu;
}

std::vector<double> solve_truncated_eigenvector(double p, std::uint64_t h) {
  std::vector<double> dense = solve_truncated_eigenvector_dense(p, h);

  // Closed-form iteration: nu(1) = nu(0)/(1+1/p), then
  // nu(k+1) = (k/(k+1+1/p)) nu(k); over-weight coordinate from its row.
  std::vector<double> iter(h + 2);
  iter[0] = 1.0 - p;
  if (h >= 1) {
    iter[1] = iter[0] / (1.0 + 1.0 / p);
    for (std::uint64_t k = 1; k < h; ++k)
      iter[k + 1] = iter[k] * double(k) / (double(k) + 1.0 + 1.0 / p);
    iter[h + 1] = p * double(h) * double(h + 1) / (1.0 - p) * iter[h];
  } else {
    iter[1] = p * iter[0] / (1.0 - p);
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < iter.size(); ++i) {
    double denom = std::max(std::fabs(iter[i]), 1e-300);
    worst = std::max(worst, std::fabs(dense[i] - iter[i]) / denom);
  }
  if (worst > 1e-12)
    throw std::runtime_error("eigenvector: dense solve and closed form disagree");

  // The coordinate-0 eigen-row was replaced by the normalization, so it
  // serves as an independent consistency check of the solution.
  double mass = iter[0] + iter[h + 1];
  for (std::uint64_t k = 1; k <= h; ++k) mass += double(k) * iter[k];
  if (std::fabs((1.0 - p) * mass - iter[0]) > 1e-12)
    throw std::runtime_error("eigenvector: coordinate-0 row violated");
  return iter;
}

MalthusianEstimate estimate_malthusian(const Trajectory& traj, double min_t) {
  if (traj.samples.empty()) throw std::invalid_argument("estimate_malthusian: empty trajectory");
  double t_end = traj.samples.back().t;
  if (t_end < min_t) throw std::invalid_argument("estimate_malthusian: trajectory too short");
  std::vector<double> xs, ys;
  for (const auto& s : traj.samples) {
    if (s.t < t_end / 2.0) continue;  // skip the transient
    xs.push_back(s.t);
    ys.push_back(std::log(double(s.n)));
  }
  if (xs.size() < 2) throw std::invalid_argument("estimate_malthusian: too few tail samples");
  auto fit = stats::linear_fit(xs, ys);
  double scaled = std::exp(-t_end) * double(traj.samples.back().n);
  return {fit.slope, scaled};
}

double pair_census(const ClusterCensus& census,
                   const std::function<double(std::uint64_t)>& f) {
  double sum = 0.0;
  for (std::size_t k = 0; k < census.counts.size(); ++k)
    if (census.counts[k] != 0) sum += f(k) * double(census.counts[k]);
  return sum;
}

std::string trajectory_census_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,k,count\n";
  char buf[32];
  for (const auto& [t, cen] : traj.census_samples) {
    std::snprintf(buf, sizeof buf, "%.6f", t);
    for (std::size_t k = 0; k < cen.counts.size(); ++k)
      if (cen.counts[k] != 0) out << buf << "," << k << "," << cen.counts[k] << "\n";
  }
  return out.str();
}

std::string eigenvector_csv(const std::vector<double>& nu) {
  std::ostringstream out;
  out << "k,nu\n";
  char buf[40];
  for (std::size_t k = 0; k < nu.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", nu[k]);
    out << k << "," << buf << "\n";
  }
  return out.str();
}

}  // namespace rrt
