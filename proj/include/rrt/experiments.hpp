#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rrt/rng.hpp"

namespace rrt {

// Tabular experiment output: one schema of rows plus named summary scalars.
// CSV prints the rows under a header and the summary as trailing '#' lines;
// JSON mirrors rows as an array of objects plus a "summary" object.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<nlohmann::json> cells);
  void set_summary(const std::string& key, nlohmann::json value);

  std::string to_csv() const;
  std::string to_json() const;
  std::string render(const std::string& format) const;  // "csv" or "json"
  void sort_rows();

  const std::vector<std::vector<nlohmann::json>>& rows() const { return rows_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<nlohmann::json>> rows_;
  std::vector<std::pair<std::string, nlohmann::json>> summary_;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  double p = 0.6;
  std::uint64_t n = 1u << 20;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t replicates = 20;
  std::uint64_t seed = 20250810;
  std::uint64_t h = 5;          // truncation level for branching runs
  double q = 0.0;               // l^q exponent; 0 = use 1/p + 0.5
  double t_end = 12.0;          // branching horizon
  unsigned workers = 0;         // 0 = hardware concurrency
  std::string format = "csv";   // csv | json
  std::string out_path;         // empty = stdout
  bool sort_rows = false;

  unsigned effective_workers() const;
  double effective_q() const { return q > 0.0 ? q : 1.0 / p + 0.5; }
  void validate() const;
};

struct ExperimentResult {
  Table table;
  bool all_pass = true;
  // Named scalar outcomes, for programmatic checks (acceptance suite).
  std::map<std::string, double> metrics;
};

// Replicate-parallel map with deterministic output: workers pull indices
// from a shared counter but results land in their own slots, so reductions
// run in replicate order regardless of scheduling.
template <class R, class Fn>
std::vector<R> run_replicates(std::uint64_t count, unsigned workers, Fn&& fn) {
  std::vector<R> out(count);
  if (count == 0) return out;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

// Law-of-large-numbers table: per-k empirical proportions against nu_p with
// z-scores, plus the log-log slope over k in [8, 64].
ExperimentResult run_proportions(const ExperimentConfig& cfg);

// Largest-cluster scaling: ranked scaled sizes over an n-grid, the growth exponent
// of the largest cluster, and l^q tail diagnostics.
ExperimentResult run_largest(const ExperimentConfig& cfg);

// Limit-law comparisons: KS between simulated scaled cluster sizes and
// the marginal limit samplers, with the Mittag-Leffler sampler itself first
// checked against the Yule-martingale oracle.
ExperimentResult run_limit_laws(const ExperimentConfig& cfg);

// Branching checks: Malthusian slope, Exp(1) limit of e^{-t} N_t, per-k ratio
// estimates of nu_p, and truncated-eigenvector residuals.
ExperimentResult run_branching(const ExperimentConfig& cfg);

// Exhaustive small-n ground truth: coupling identity, Ewens exactness,
// census chain vs enumeration.
ExperimentResult run_oracle_checks(const ExperimentConfig& cfg);

// Scaled cluster statistics of one simulation pool at fixed n (shared by
// run_limit_laws and the acceptance suite). Sample vectors are sub-selected
// by the root-mark conditioning events, so lengths differ.
struct LimitLawSamples {
  std::vector<double> bond1, bond2, bond3;     // n^{-p} |bond cluster i|
  std::vector<double> site11, site12;          // pieces (1,1), (1,2); omega(1)=0 runs
  std::vector<double> site21, site22;          // pieces (2,1), (2,2); all runs
  std::vector<double> root_open;               // n^{-p} |Pi_1| on omega(1)=1 runs
};
LimitLawSamples collect_limit_law_samples(double p, std::uint64_t n,
                                          std::uint64_t replicates, std::uint64_t seed,
                                          unsigned workers);

// Draws from the marginal samplers / the ML oracle, replicate-seeded.
std::vector<double> draw_sampler(const std::string& name, std::uint64_t count,
                                 std::uint64_t seed, unsigned workers,
                                 const std::function<double(Rng&)>& fn);

}  // namespace rrt
