// Experiment harness for site/bond percolation on random recursive trees.
// Subcommands: proportions | largest | limit-laws | branching | oracle |
// grow | export-dot. Exit code 0 when every emitted check passes, 1 when
// any fails, 2 on configuration errors.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rrt/branching.hpp"
#include "rrt/experiments.hpp"
#include "rrt/limits.hpp"
#include "rrt/oracle.hpp"
#include "rrt/percolation.hpp"
#include "rrt/tree.hpp"

namespace {

// "mittag-leffler", "bond:<i>", or "site:<i>:<j>".
double dispatch_sampler(const std::string& name, double p, rrt::Rng& rng) {
  if (name == "mittag-leffler") return rrt::sample_mittag_leffler(p, rng);
  auto parse_tail = [](const std::string& s, std::size_t from) {
    return std::uint64_t(std::stoull(s.substr(from)));
  };
  if (name.rfind("bond:", 0) == 0) return rrt::sample_limit_bond(p, parse_tail(name, 5), rng);
  if (name.rfind("site:", 0) == 0) {
    auto rest = name.substr(5);
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
      std::uint64_t i = std::stoull(rest.substr(0, colon));
      std::uint64_t j = std::stoull(rest.substr(colon + 1));
      return rrt::sample_limit_site(p, i, j, rng);
    }
  }
  throw rrt::ConfigError("unknown sampler: " + name);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rrt::ConfigError("cannot open output path: " + path);
  out << text;
}

void add_common_flags(CLI::App* cmd, rrt::ExperimentConfig& cfg) {
  cmd->add_option("--p", cfg.p, "percolation parameter in (0,1)");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--reps", cfg.replicates, "number of replicates");
  cmd->add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
  cmd->add_option("--format", cfg.format, "output format: csv or json");
  cmd->add_option("--out", cfg.out_path, "output path (default stdout)");
  cmd->add_flag("--sort", cfg.sort_rows, "canonically sort table rows");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"site/bond percolation on random recursive trees"};
  app.require_subcommand(1);
  // --h is a real flag (truncation level), so help stays on --help only.
  app.set_help_flag("--help", "print help");

  rrt::ExperimentConfig cfg;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t grow_n = 300;
  std::string in_path;
  bool with_marks = false;

  auto* c_prop = app.add_subcommand("proportions", "cluster-size proportions vs the Yule-Simon law");
  add_common_flags(c_prop, cfg);
  c_prop->add_option("--n", cfg.n, "tree size");

  auto* c_largest = app.add_subcommand("largest", "scaled ranked cluster sizes over an n-grid");
  add_common_flags(c_largest, cfg);
  c_largest->add_option("--n-grid", n_grid, "comma-separated tree sizes")->delimiter(',');
  c_largest->add_option("--q", cfg.q, "l^q exponent (default 1/p + 0.5)");

  std::string sampler_name, sampler_out, pmf_out, bond_pmf_out;
  std::uint64_t sampler_count = 10000, pmf_kmax = 64;
  auto* c_limit = app.add_subcommand("limit-laws", "simulated scaled clusters vs the limit samplers");
  add_common_flags(c_limit, cfg);
  c_limit->add_option("--n", cfg.n, "tree size");
  c_limit->add_option("--pmf-out", pmf_out, "write the site pmf table (k,pmf) and exit");
  c_limit->add_option("--bond-pmf-out", bond_pmf_out, "write the bond pmf table (k,pmf) and exit");
  c_limit->add_option("--k-max", pmf_kmax, "largest k in pmf tables");
  c_limit->add_option("--sampler", sampler_name,
                      "dump raw draws instead: mittag-leffler | bond:<i> | site:<i>:<j>");
  c_limit->add_option("--sampler-out", sampler_out, "path for the raw sampler draws");
  c_limit->add_option("--sampler-count", sampler_count, "number of raw draws");

  std::string trace_out, nu_out;
  auto* c_branch = app.add_subcommand("branching", "branching-process simulation checks");
  c_branch->set_help_flag("--help", "print help");
  add_common_flags(c_branch, cfg);
  c_branch->add_option("--h", cfg.h, "truncation level");
  c_branch->add_option("--t-end", cfg.t_end, "simulation horizon");
  c_branch->add_option("--trace-out", trace_out, "also write one trajectory log (t,k,count)");
  c_branch->add_option("--nu-out", nu_out, "also write the truncated eigenvector (k,nu)");

  std::uint64_t law_n = 6;
  std::string law_out;
  auto* c_oracle = app.add_subcommand("oracle", "exhaustive small-n oracle checks");
  add_common_flags(c_oracle, cfg);
  c_oracle->add_option("--law-out", law_out, "also export the exact census law as CSV");
  c_oracle->add_option("--n", law_n, "size for the exact-law export");

  auto* c_grow = app.add_subcommand("grow", "grow one tree and write it as JSON");
  add_common_flags(c_grow, cfg);
  c_grow->add_option("--n", grow_n, "tree size");
  c_grow->add_flag("--marks", with_marks, "also draw Bernoulli(p) site marks");

  auto* c_dot = app.add_subcommand("export-dot", "render a tree in DOT format");
  add_common_flags(c_dot, cfg);
  c_dot->add_option("--n", grow_n, "tree size (when growing a fresh tree)");
  c_dot->add_option("--in", in_path, "read a JSON tree instead of growing one");
  c_dot->add_flag("--marks", with_marks, "style vertices by open/closed marks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.n_grid = n_grid;
    rrt::ExperimentResult result{rrt::Table({})};
    bool is_experiment = true;

    if (c_prop->parsed()) {
      result = rrt::run_proportions(cfg);
    } else if (c_largest->parsed()) {
      if (c_largest->count("--reps") == 0) cfg.replicates = 200;
      result = rrt::run_largest(cfg);
    } else if (c_limit->parsed()) {
      if (!pmf_out.empty() || !bond_pmf_out.empty() || !sampler_name.empty()) {
        is_experiment = false;
        if (!pmf_out.empty())
          write_output(rrt::pmf_table_csv(cfg.p, pmf_kmax, false), pmf_out);
        if (!bond_pmf_out.empty())
          write_output(rrt::pmf_table_csv(cfg.p, pmf_kmax, true), bond_pmf_out);
        if (!sampler_name.empty()) {
          auto draws = rrt::draw_sampler(
              "cli:" + sampler_name, sampler_count, cfg.seed, cfg.effective_workers(),
              [&](rrt::Rng& rng) { return dispatch_sampler(sampler_name, cfg.p, rng); });
          std::string text = "value\n";
          char buf[40];
          for (double v : draws) {
            std::snprintf(buf, sizeof buf, "%.17g\n", v);
            text += buf;
          }
          write_output(text, sampler_out);
        }
      } else {
        if (c_limit->count("--reps") == 0) cfg.replicates = 10000;
        result = rrt::run_limit_laws(cfg);
      }
    } else if (c_branch->parsed()) {
      if (c_branch->count("--reps") == 0) cfg.replicates = 10000;
      result = rrt::run_branching(cfg);
      if (!trace_out.empty()) {
        rrt::Rng rng = rrt::derive_stream(cfg.seed, "branching-trace", 0);
        rrt::SimulateOptions opt;
        opt.t_end = cfg.t_end;
        opt.sample_dt = cfg.t_end / 48.0;
        opt.record_census = true;
        write_output(rrt::trajectory_census_csv(rrt::simulate_Z(cfg.p, opt, rng)), trace_out);
      }
      if (!nu_out.empty())
        write_output(rrt::eigenvector_csv(rrt::solve_truncated_eigenvector(cfg.p, cfg.h)),
                     nu_out);
    } else if (c_oracle->parsed()) {
      result = rrt::run_oracle_checks(cfg);
      if (!law_out.empty()) {
        auto p_rat = rrt::Rational::from_double(cfg.p, 1000);
        write_output(rrt::oracle::distribution_csv(
                         rrt::oracle::exact_census_distribution(rrt::Vertex(law_n), p_rat)),
                     law_out);
      }
    } else if (c_grow->parsed()) {
      is_experiment = false;
      rrt::Rng rng(cfg.seed);
      rrt::RecursiveTree tree = rrt::grow_yule(rrt::Vertex(grow_n), rng);
      if (with_marks) {
        rrt::SiteMarks marks = rrt::mark_sites(tree, cfg.p, rng);
        write_output(rrt::to_json(tree, &marks) + "\n", cfg.out_path);
      } else {
        write_output(rrt::to_json(tree) + "\n", cfg.out_path);
      }
    } else if (c_dot->parsed()) {
      is_experiment = false;
      if (!in_path.empty()) {
        std::ifstream in(in_path, std::ios::binary);
        if (!in) throw rrt::ConfigError("cannot open input path: " + in_path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        auto [tree, marks] = rrt::tree_from_json(text);
        write_output(rrt::export_dot(tree, marks ? &*marks : nullptr), cfg.out_path);
      } else {
        rrt::Rng rng(cfg.seed);
        rrt::RecursiveTree tree = rrt::grow_uniform(rrt::Vertex(grow_n), rng);
        if (with_marks) {
          rrt::SiteMarks marks = rrt::mark_sites(tree, cfg.p, rng);
          write_output(rrt::export_dot(tree, &marks), cfg.out_path);
        } else {
          write_output(rrt::export_dot(tree), cfg.out_path);
        }
      }
    }

    if (is_experiment) {
      write_output(result.table.render(cfg.format), cfg.out_path);
      std::cerr << (result.all_pass ? "all checks passed" : "SOME CHECKS FAILED") << "\n";
      return result.all_pass ? 0 : 1;
    }
    return 0;
  } catch (const rrt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
