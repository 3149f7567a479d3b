#include "rrt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rrt/branching.hpp"
#include "rrt/limits.hpp"
#include "rrt/oracle.hpp"
#include "rrt/percolation.hpp"
#include "rrt/stats.hpp"
#include "rrt/tree.hpp"

namespace rrt {

namespace {

std::string fmt(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

nlohmann::json num(double x) {
  // Keep NaN/inf printable; nlohmann would serialize them as null.
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

constexpr double kTestLevel = 0.01;  // chi^2 / KS level before Bonferroni

}  // namespace

void Table::add_row(std::vector<nlohmann::json> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("Table: row width does not match the header");
  rows_.push_back(std::move(cells));
}

void Table::set_summary(const std::string& key, nlohmann::json value) {
  summary_.emplace_back(key, std::move(value));
}

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns_.size(); ++c)
    out << (c ? "," : "") << columns_[c];
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt(row[c]);
    out << "\n";
  }
  for (const auto& [k, v] : summary_) out << "# " << k << "," << fmt(v) << "\n";
  return out.str();
}

std::string Table::to_json() const {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj;
    for (std::size_t c = 0; c < row.size(); ++c) obj[columns_[c]] = row[c];
    j["rows"].push_back(std::move(obj));
  }
  nlohmann::json s;
  for (const auto& [k, v] : summary_) s[k] = v;
  j["summary"] = std::move(s);
  return j.dump(2) + "\n";
}

std::string Table::render(const std::string& format) const {
  if (format == "json") return to_json();
  return to_csv();
}

void Table::sort_rows() {
  std::sort(rows_.begin(), rows_.end(),
            [](const auto& a, const auto& b) { return a < b; });
}

unsigned ExperimentConfig::effective_workers() const {
  if (workers > 0) return workers;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void ExperimentConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("config: p must lie in (0,1)");
  if (replicates < 1) throw ConfigError("config: replicates must be >= 1");
  if (n < 1) throw ConfigError("config: n must be >= 1");
  if (format != "csv" && format != "json") throw ConfigError("config: format must be csv or json");
  if (q != 0.0 && !(q >= 1.0)) throw ConfigError("config: q must be >= 1");
}

std::vector<double> draw_sampler(const std::string& name, std::uint64_t count,
                                 std::uint64_t seed, unsigned workers,
                                 const std::function<double(Rng&)>& fn) {
  return run_replicates<double>(count, workers, [&](std::uint64_t i) {
    Rng rng = derive_stream(seed, name, i);
    return fn(rng);
  });
}

// ---------------------------------------------------------------------------
// proportions

ExperimentResult run_proportions(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::uint64_t n = cfg.n;
  const double p = cfg.p;
  constexpr std::size_t kMax = 64;

  struct RepResult {
    std::vector<double> proportion;  // X_n(k)/n for k = 0..kMax
  };
  auto reps = run_replicates<RepResult>(
      cfg.replicates, cfg.effective_workers(), [&](std::uint64_t r) {
        Rng rng = derive_stream(cfg.seed, "proportions", r);
        RecursiveTree tree = grow_uniform(Vertex(n), rng);
        SiteMarks marks = mark_sites(tree, p, rng);
        ClusterCensus cen = census(site_partition(tree, marks));
        RepResult out;
        out.proportion.assign(kMax + 1, 0.0);
        for (std::size_t k = 0; k <= kMax; ++k)
          out.proportion[k] = double(cen.count(k)) / double(n);
        return out;
      });

  std::vector<stats::RunningStat> acc(kMax + 1);
  for (const auto& r : reps)
    for (std::size_t k = 0; k <= kMax; ++k) acc[k].push(r.proportion[k]);

  // Within the enumeration cap the exact law is the ground truth and the
  // asymptotic bands would reject on finite-size bias alone; there the
  // chi-square against the exact law decides, with z-scores informational.
  const bool exact_mode = n <= oracle::kOracleCap;

  ExperimentResult res{Table({"k", "mean_proportion", "std_error", "nu_p", "z_score",
                              "pass_3sigma", "n", "replicates"})};
  bool rows_pass = true;
  for (std::size_t k = 0; k <= kMax; ++k) {
    double mean = acc[k].mean();
    double se = acc[k].std_error();
    double nu = yule_simon_pmf(p, k);
    double z = se > 0 ? (mean - nu) / se : (mean == nu ? 0.0 : INFINITY);
    bool judged = k <= 10 && !exact_mode;
    bool pass = !judged || std::fabs(z) <= 3.0;
    if (judged) rows_pass = rows_pass && pass;
    res.table.add_row({std::uint64_t(k), num(mean), num(se), num(nu), num(z),
                       pass, n, cfg.replicates});
    if (k <= 10) res.metrics["z_" + std::to_string(k)] = z;
  }

  // Log-log slope of the empirical proportions over k in [8, 64].
  std::vector<double> xs, ys;
  for (std::size_t k = 8; k <= kMax; ++k)
    if (acc[k].mean() > 0.0) {
      xs.push_back(std::log(double(k)));
      ys.push_back(std::log(acc[k].mean()));
    }
  double slope = NAN;
  if (xs.size() >= 5) slope = stats::linear_fit(xs, ys).slope;
  double target = -(1.0 + 1.0 / p);
  bool slope_pass = exact_mode || (std::isfinite(slope) && std::fabs(slope - target) <= 0.15);
  res.table.set_summary("slope_loglog_8_64", num(slope));
  res.table.set_summary("slope_target", num(target));
  res.table.set_summary("slope_pass_0.15", slope_pass);
  res.metrics["slope"] = slope;
  res.metrics["slope_abs_error"] = std::fabs(slope - target);

  // Exact-law cross check when enumeration is feasible.
  if (exact_mode && n >= 2) {
    auto exact = oracle::exact_census_distribution_d(Vertex(n), p);
    std::map<oracle::CensusKey, std::uint64_t> observed;
    for (std::uint64_t r = 0; r < cfg.replicates; ++r) {
      Rng rng = derive_stream(cfg.seed, "proportions", r);
      RecursiveTree tree = grow_uniform(Vertex(n), rng);
      SiteMarks marks = mark_sites(tree, p, rng);
      ++observed[oracle::census_key(census(site_partition(tree, marks)))];
    }
    std::vector<double> obs, probs;
    for (const auto& [key, prob] : exact) {
      probs.push_back(prob);
      auto it = observed.find(key);
      obs.push_back(it == observed.end() ? 0.0 : double(it->second));
    }
    auto chi = stats::chi2_gof(obs, probs, double(cfg.replicates));
    res.table.set_summary("chi2_vs_exact_p_value", num(chi.p_value));
    res.table.set_summary("chi2_vs_exact_pass", chi.p_value > 0.001);
    res.metrics["chi2_p_value"] = chi.p_value;
    rows_pass = rows_pass && chi.p_value > 0.001;
  }

  res.all_pass = rows_pass && slope_pass;
  res.metrics["all_pass"] = res.all_pass ? 1.0 : 0.0;
  if (cfg.sort_rows) res.table.sort_rows();
  return res;
}

// ---------------------------------------------------------------------------
// largest clusters

ExperimentResult run_largest(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::uint64_t> grid = cfg.n_grid;
  if (grid.empty())
    for (std::uint64_t e = 10; e <= 20; ++e) grid.push_back(std::uint64_t(1) << e);
  std::sort(grid.begin(), grid.end());
  if (grid.size() < 4 || grid.front() == 0 || grid.back() < 8 * grid.front())
    throw ConfigError("largest: need >= 4 sizes spanning >= 3 octaves");
  const double p = cfg.p;
  const double q = cfg.effective_q();
  if (!(q > 1.0 / p))
    throw ConfigError("largest: l^q reports need q > 1/p");
  constexpr std::size_t kRanks = 5;
  constexpr std::size_t kTruncLen = 128;  // ranked vector truncation
  constexpr std::size_t kTailFrom = 64;   // tail diagnostic split point

  struct RepResult {
    double top[kRanks];
    double lq = 0.0;
    double tail_fraction = 0.0;
  };

  ExperimentResult res{Table({"n", "rank", "mean", "std_error", "q10", "q50", "q90",
                              "replicates"})};
  std::vector<double> log_n, log_mean_top, first_small, first_mid, first_large;
  stats::RunningStat lq_stat, tail_stat;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const std::uint64_t n = grid[g];
    const double scale = std::pow(double(n), -p);
    auto reps = run_replicates<RepResult>(
        cfg.replicates, cfg.effective_workers(), [&](std::uint64_t r) {
          Rng rng = derive_stream(cfg.seed, "largest:" + std::to_string(n), r);
          RecursiveTree tree = grow_uniform(Vertex(n), rng);
          SiteMarks marks = mark_sites(tree, p, rng);
          auto ranked = ranked_sizes(site_partition(tree, marks), scale);
          RepResult out;
          for (std::size_t i = 0; i < kRanks; ++i)
            out.top[i] = i < ranked.size() ? ranked[i] : 0.0;
          if (ranked.size() > kTruncLen) ranked.resize(kTruncLen);
          double head = 0.0, tail = 0.0;
          for (std::size_t i = 0; i < ranked.size(); ++i)
            (i < kTailFrom ? head : tail) += std::pow(ranked[i], q);
          out.lq = std::pow(head + tail, 1.0 / q);
          out.tail_fraction = head + tail > 0 ? tail / (head + tail) : 0.0;
          return out;
        });

    for (std::size_t rank = 0; rank < kRanks; ++rank) {
      stats::RunningStat st;
      std::vector<double> vals(reps.size());
      for (std::size_t r = 0; r < reps.size(); ++r) {
        st.push(reps[r].top[rank]);
        vals[r] = reps[r].top[rank];
      }
      res.table.add_row({n, std::uint64_t(rank + 1), num(st.mean()), num(st.std_error()),
                         num(stats::quantile(vals, 0.10)), num(stats::quantile(vals, 0.50)),
                         num(stats::quantile(vals, 0.90)), cfg.replicates});
    }
    stats::RunningStat top_unscaled;
    for (const auto& r : reps) top_unscaled.push(r.top[0] / scale);
    log_n.push_back(std::log(double(n)));
    log_mean_top.push_back(std::log(top_unscaled.mean()));
    if (g == grid.size() - 1) {
      for (const auto& r : reps) {
        first_large.push_back(r.top[0]);
        lq_stat.push(r.lq);
        tail_stat.push(r.tail_fraction);
      }
    }
    if (g == 0)
      for (const auto& r : reps) first_small.push_back(r.top[0]);
    if (g + 2 == grid.size())
      for (const auto& r : reps) first_mid.push_back(r.top[0]);
  }

  double slope = stats::linear_fit(log_n, log_mean_top).slope;
  bool slope_pass = std::fabs(slope - p) <= 0.05;
  res.table.set_summary("slope_log_mean_largest", num(slope));
  res.table.set_summary("slope_target", num(p));
  res.table.set_summary("slope_pass_0.05", slope_pass);
  res.metrics["slope"] = slope;
  res.metrics["slope_abs_error"] = std::fabs(slope - p);

  // Cauchy-in-distribution trend of the scaled first coordinate. Reported
  // as a diagnostic: resolving it needs far more replicates than the slope.
  double ks_near = stats::ks_test(first_mid, first_large).statistic;
  double ks_far = stats::ks_test(first_small, first_large).statistic;
  res.table.set_summary("ks_distance_adjacent", num(ks_near));
  res.table.set_summary("ks_distance_extremes", num(ks_far));
  res.metrics["ks_near"] = ks_near;
  res.metrics["ks_far"] = ks_far;

  res.table.set_summary("lq_exponent", num(q));
  res.table.set_summary("lq_norm_mean_at_max_n", num(lq_stat.mean()));
  res.table.set_summary("lq_tail_fraction_beyond_64", num(tail_stat.mean()));
  res.metrics["lq_tail_fraction"] = tail_stat.mean();

  res.all_pass = slope_pass;
  res.metrics["all_pass"] = res.all_pass ? 1.0 : 0.0;
  if (cfg.sort_rows) res.table.sort_rows();
  return res;
}

// ---------------------------------------------------------------------------
// limit laws

LimitLawSamples collect_limit_law_samples(double p, std::uint64_t n,
                                          std::uint64_t replicates, std::uint64_t seed,
                                          unsigned workers) {
  struct RepResult {
    double bond1 = 0, bond2 = -1, bond3 = -1;
    double site11 = -1, site12 = -1, site21 = -1, site22 = -1;
    double root_open = -1;  // -1 = statistic absent in this replicate
  };
  const double scale = std::pow(double(n), -p);
  auto reps = run_replicates<RepResult>(replicates, workers, [&](std::uint64_t r) {
    Rng rng = derive_stream(seed, "limit-laws", r);
    RecursiveTree tree = grow_uniform(Vertex(n), rng);
    SiteMarks marks = mark_sites(tree, p, rng);
    auto bond = bond_partition(tree, marks);
    auto iso = root_isolation(tree, marks, bond);
    RepResult out;
    out.bond1 = double(bond.sizes[0]) * scale;
    if (bond.num_clusters() > 1) out.bond2 = double(bond.sizes[1]) * scale;
    if (bond.num_clusters() > 2) out.bond3 = double(bond.sizes[2]) * scale;
    auto piece = [&](std::uint32_t i, std::uint32_t j) {
      auto c = iso.find_piece(i, j);
      return c < 0 ? 0.0 : double(iso.partition.sizes[std::size_t(c)]) * scale;
    };
    if (!marks.is_open(1)) {
      // Root closed: cluster 1 is isolated and its pieces are defined.
      out.site11 = piece(0, 1);
      out.site12 = piece(0, 2);
    } else {
      // Root open: Pi_1 is the whole first bond cluster.
      out.root_open = double(iso.partition.sizes[0]) * scale;
    }
    if (bond.num_clusters() > 1) {
      out.site21 = piece(1, 1);
      out.site22 = piece(1, 2);
    }
    return out;
  });

  LimitLawSamples s;
  for (const auto& r : reps) {
    s.bond1.push_back(r.bond1);
    if (r.bond2 >= 0) s.bond2.push_back(r.bond2);
    if (r.bond3 >= 0) s.bond3.push_back(r.bond3);
    if (r.site11 >= 0) s.site11.push_back(r.site11);
    if (r.site12 >= 0) s.site12.push_back(r.site12);
    if (r.site21 >= 0) s.site21.push_back(r.site21);
    if (r.site22 >= 0) s.site22.push_back(r.site22);
    if (r.root_open >= 0) s.root_open.push_back(r.root_open);
  }
  return s;
}

ExperimentResult run_limit_laws(const ExperimentConfig& cfg) {
  cfg.validate();
  const double p = cfg.p;
  const std::uint64_t sampler_draws = 100000;
  const unsigned workers = cfg.effective_workers();

  auto samples = collect_limit_law_samples(p, cfg.n, cfg.replicates, cfg.seed, workers);

  // The Mittag-Leffler sampler must first match the Yule-martingale oracle.
  const double oracle_t = 14.0;
  std::uint64_t oracle_draws = std::min<std::uint64_t>(cfg.replicates, 10000);
  auto oracle_side =
      draw_sampler("ml-oracle", oracle_draws, cfg.seed, workers,
                   [&](Rng& rng) { return sample_scaled_root_cluster(p, oracle_t, rng); });
  auto ml_side = draw_sampler("ml-sampler", sampler_draws, cfg.seed, workers,
                              [&](Rng& rng) { return sample_mittag_leffler(p, rng); });

  struct Comparison {
    std::string name;
    const std::vector<double>* sim;
    std::function<double(Rng&)> sampler;
    bool pinned;  // member of the acceptance family (Bonferroni across 3)
  };
  std::vector<Comparison> comps = {
      {"bond_W1", &samples.bond1, [&](Rng& r) { return sample_limit_bond(p, 1, r); }, true},
      {"bond_W2", &samples.bond2, [&](Rng& r) { return sample_limit_bond(p, 2, r); }, true},
      {"site_W1V11", &samples.site11, [&](Rng& r) { return sample_limit_site(p, 1, 1, r); }, true},
      {"bond_W3", &samples.bond3, [&](Rng& r) { return sample_limit_bond(p, 3, r); }, false},
      {"site_W1V12", &samples.site12, [&](Rng& r) { return sample_limit_site(p, 1, 2, r); }, false},
      {"site_W2V21", &samples.site21, [&](Rng& r) { return sample_limit_site(p, 2, 1, r); }, false},
      {"site_W2V22", &samples.site22, [&](Rng& r) { return sample_limit_site(p, 2, 2, r); }, false},
      {"site_Pi1_root_open", &samples.root_open,
       [&](Rng& r) { return sample_mittag_leffler(p, r); }, false},
  };

  ExperimentResult res{Table({"statistic", "n_sim", "n_sampler", "ks_D", "ks_p_value",
                              "level", "pass"})};
  auto oracle_ks = stats::ks_test(ml_side, oracle_side);
  bool oracle_pass = oracle_ks.p_value > kTestLevel;
  res.table.add_row({"mittag_leffler_vs_yule_oracle", oracle_side.size(), ml_side.size(),
                     num(oracle_ks.statistic), num(oracle_ks.p_value), num(kTestLevel),
                     oracle_pass});
  res.metrics["ml_oracle_p_value"] = oracle_ks.p_value;
  bool pinned_pass = true, extended_pass = true;
  const double pinned_level = kTestLevel / 3.0;  // Bonferroni across the 3 comparisons
  const double extended_level = kTestLevel / double(comps.size() - 3);
  for (auto& c : comps) {
    if (c.sim->empty()) continue;
    auto sampler_sample =
        draw_sampler("sampler:" + c.name, sampler_draws, cfg.seed, workers, c.sampler);
    auto ks = stats::ks_test(*c.sim, sampler_sample);
    double level = c.pinned ? pinned_level : extended_level;
    bool pass = ks.p_value > level;
    res.table.add_row({c.name, c.sim->size(), sampler_sample.size(), num(ks.statistic),
                       num(ks.p_value), num(level), pass});
    res.metrics["ks_p_" + c.name] = ks.p_value;
    (c.pinned ? pinned_pass : extended_pass) &= pass;
  }
  res.metrics["pinned_pass"] = pinned_pass && oracle_pass ? 1.0 : 0.0;
  res.table.set_summary("acceptance_family_pass", pinned_pass && oracle_pass);
  res.table.set_summary("extended_family_pass", extended_pass);
  res.all_pass = oracle_pass && pinned_pass && extended_pass;
  res.metrics["all_pass"] = res.all_pass ? 1.0 : 0.0;
  if (cfg.sort_rows) res.table.sort_rows();
  return res;
}

// ---------------------------------------------------------------------------
// branching

ExperimentResult run_branching(const ExperimentConfig& cfg) {
  cfg.validate();
  const double p = cfg.p;
  const double t_end = cfg.t_end;
  const unsigned workers = cfg.effective_workers();
  constexpr std::size_t kMax = 10;

  struct RepResult {
    double scaled_n = 0.0;
    double ratio[kMax + 1] = {0};
  };
  auto reps = run_replicates<RepResult>(cfg.replicates, workers, [&](std::uint64_t r) {
    Rng rng = derive_stream(cfg.seed, "branching", r);
    SimulateOptions opt;
    opt.t_end = t_end;
    auto traj = simulate_Z(p, opt, rng);
    RepResult out;
    const auto& st = traj.final_state;
    out.scaled_n = std::exp(-t_end) * double(st.total_vertices());
    for (std::size_t k = 0; k <= kMax; ++k)
      out.ratio[k] = double(st.census.count(k)) / double(st.total_vertices());
    return out;
  });

  ExperimentResult res{Table({"k", "ratio_mean", "std_error", "nu_p", "z_score",
                              "pass_3sigma", "replicates"})};
  bool ratio_pass = true;
  for (std::size_t k = 0; k <= kMax; ++k) {
    stats::RunningStat st;
    for (const auto& r : reps) st.push(r.ratio[k]);
    double nu = yule_simon_pmf(p, k);
    double z = st.std_error() > 0 ? (st.mean() - nu) / st.std_error() : 0.0;
    bool pass = std::fabs(z) <= 3.0;
    ratio_pass = ratio_pass && pass;
    res.table.add_row({std::uint64_t(k), num(st.mean()), num(st.std_error()), num(nu),
                       num(z), pass, cfg.replicates});
    res.metrics["ratio_z_" + std::to_string(k)] = z;
  }

  // e^{-t} N_t against Exp(1).
  std::vector<double> scaled;
  scaled.reserve(reps.size());
  for (const auto& r : reps) scaled.push_back(r.scaled_n);
  auto ks = stats::ks_test(scaled, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); });
  bool ks_pass = ks.p_value > kTestLevel;
  res.table.set_summary("exp1_ks_D", num(ks.statistic));
  res.table.set_summary("exp1_ks_p_value", num(ks.p_value));
  res.table.set_summary("exp1_ks_pass", ks_pass);
  res.metrics["exp1_ks_p_value"] = ks.p_value;

  // Malthusian slope over sampled trajectories.
  const std::uint64_t slope_runs = std::min<std::uint64_t>(cfg.replicates, 100);
  auto slopes = run_replicates<double>(slope_runs, workers, [&](std::uint64_t r) {
    Rng rng = derive_stream(cfg.seed, "branching-slope", r);
    SimulateOptions opt;
    opt.t_end = t_end;
    opt.sample_dt = t_end / 48.0;
    return estimate_malthusian(simulate_Z(p, opt, rng)).slope;
  });
  stats::RunningStat slope_stat;
  for (double s : slopes) slope_stat.push(s);
  bool slope_pass = std::fabs(slope_stat.mean() - 1.0) <= 0.05;
  res.table.set_summary("malthusian_slope_mean", num(slope_stat.mean()));
  res.table.set_summary("malthusian_slope_pass_0.05", slope_pass);
  res.metrics["malthusian_slope"] = slope_stat.mean();

  // Truncated eigenvector against the closed form.
  double worst = 0.0;
  for (double pp : {0.2, 0.5, 0.8, p}) {
    auto nu = solve_truncated_eigenvector(pp, 200);
    for (std::uint64_t k = 0; k <= 200; ++k) {
      double closed = yule_simon_pmf(pp, k);
      worst = std::max(worst, std::fabs(nu[k] - closed) / closed);
    }
  }
  bool eig_pass = worst < 1e-12;
  res.table.set_summary("eigenvector_max_rel_residual_h200", num(worst));
  res.table.set_summary("eigenvector_pass_1e-12", eig_pass);
  res.metrics["eigenvector_residual"] = worst;

  res.all_pass = ratio_pass && ks_pass && slope_pass && eig_pass;
  res.metrics["all_pass"] = res.all_pass ? 1.0 : 0.0;
  if (cfg.sort_rows) res.table.sort_rows();
  return res;
}

// ---------------------------------------------------------------------------
// oracle checks

ExperimentResult run_oracle_checks(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res{Table({"check", "parameter", "instances", "value", "pass"})};
  bool all = true;

  // Coupling identity, exhaustively for n <= 8.
  for (Vertex n = 1; n <= 8; ++n) {
    auto rep = oracle::exact_coupling_check(n);
    all = all && rep.ok();
    res.table.add_row({"coupling_identity", std::uint64_t(n), rep.instances,
                       std::uint64_t(rep.failures), rep.ok()});
  }

  // Ewens exactness for k <= 7: rational equality plus exact means.
  Rational p_rat = Rational::from_double(cfg.p, 1000);
  for (std::uint32_t k = 1; k <= 7; ++k) {
    auto dist = oracle::exact_ewens_distribution(k);
    bool ok = dist.total() == Rational(1);
    std::uint64_t support = dist.mass.size();
    std::uint64_t kfact = 1;
    for (std::uint32_t i = 2; i <= k; ++i) kfact *= i;
    for (const auto& [a, mass] : dist.mass) {
      // count * prod_j j^{a_j} a_j! == k!  <=>  enumeration equals the pmf.
      __int128 prod = mass.num;  // mass = count / k!
      prod *= kfact;
      prod /= mass.den;          // recover the raw count
      __int128 weight = 1;
      for (std::size_t j = 0; j < a.size(); ++j) {
        for (std::uint32_t c = 1; c <= a[j]; ++c) weight *= __int128(j + 1) * c;
      }
      ok = ok && prod * weight == __int128(kfact);
    }
    // Exact means E[C_k(j)] = 1/j.
    for (std::uint32_t j = 1; j <= k; ++j) {
      Rational mean(0);
      for (const auto& [a, mass] : dist.mass)
        if (a[j - 1] > 0) mean = mean + mass * Rational(a[j - 1]);
      ok = ok && mean == Rational(1, j);
    }
    all = all && ok;
    res.table.add_row({"ewens_exactness", std::uint64_t(k), support, std::uint64_t(0), ok});
  }

  // Census chain vs enumeration, exact at n = 4.
  {
    auto chain = oracle::exact_chain_distribution(4, p_rat).as_double();
    auto enumd = oracle::exact_census_distribution(4, p_rat).as_double();
    double tv = oracle::total_variation(chain, enumd);
    bool ok = tv < 1e-12;
    all = all && ok;
    res.table.add_row({"chain_vs_enumeration_tv", std::uint64_t(4),
                       std::uint64_t(chain.size()), num(tv), ok});
    res.metrics["chain_tv_n4"] = tv;
  }

  // Monte Carlo chain at n = 6 against the exact law.
  {
    const Vertex n = 6;
    const std::uint64_t draws = std::max<std::uint64_t>(cfg.replicates, 200000);
    auto exact = oracle::exact_census_distribution(n, p_rat).as_double();
    auto keys = run_replicates<oracle::CensusKey>(
        draws, cfg.effective_workers(), [&](std::uint64_t r) {
          Rng rng = derive_stream(cfg.seed, "oracle-chain", r);
          ClusterCensus c = initial_census(cfg.p, rng);
          while (c.n < n) census_step(c, cfg.p, rng);
          return oracle::census_key(c);
        });
    std::map<oracle::CensusKey, std::uint64_t> observed;
    for (const auto& k : keys) ++observed[k];
    std::vector<double> obs, probs;
    for (const auto& [key, prob] : exact) {
      probs.push_back(prob);
      auto it = observed.find(key);
      obs.push_back(it == observed.end() ? 0.0 : double(it->second));
    }
    auto chi = stats::chi2_gof(obs, probs, double(draws));
    bool ok = chi.p_value > kTestLevel;
    all = all && ok;
    res.table.add_row({"chain_mc_chi2", std::uint64_t(n), draws, num(chi.p_value), ok});
    res.metrics["chain_chi2_p_n6"] = chi.p_value;
  }

  res.all_pass = all;
  res.metrics["all_pass"] = all ? 1.0 : 0.0;
  if (cfg.sort_rows) res.table.sort_rows();
  return res;
}

}  // namespace rrt
