#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "rrt/percolation.hpp"
#include "rrt/rng.hpp"

namespace rrt {

// State of the cluster-type branching process: class k counts the open
// clusters of size k (class 0 the closed vertices). Truncated mode tracks
// classes up to h plus one aggregated count of over-weighted vertices.
struct BranchingState {
  ClusterCensus census;
  std::uint64_t overweight = 0;  // truncated mode only
  double t = 0.0;
  std::int64_t h = -1;  // truncation level; -1 = full process

  std::uint64_t total_vertices() const { return census.mass() + overweight; }
};

struct TrajectoryPoint {
  double t;
  std::uint64_t n;  // total vertices
};

struct Trajectory {
  std::vector<TrajectoryPoint> samples;  // sampled grid plus the final point
  BranchingState final_state;
  std::uint64_t events = 0;
  // Census snapshots at the sample grid (only when requested).
  std::vector<std::pair<double, ClusterCensus>> census_samples;
};

struct SimulateOptions {
  double t_end = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t n_end = 0;   // stop when the population reaches n (realizes tau_n)
  double sample_dt = 0.0;    // 0: record only the final point
  bool record_census = false;  // keep full census snapshots at the grid
  std::uint64_t class_cap = std::uint64_t(1) << 20;
};

// Exact event-driven simulation of the full process. Every vertex rings at
// rate 1, so the total event rate always equals the population size; a
// type-0 ring spawns type 0 or type 1 (probabilities 1-p, p), a type-k ring
// spawns type 0 or advances the cluster to type k+1.
Trajectory simulate_Z(double p, const SimulateOptions& opt, Rng& rng);

// Truncated process: a type-h advance turns the cluster into h+1
// over-weighted vertices; each over-weighted vertex spawns type 0 at rate
// 1-p and another over-weighted vertex at rate p.
Trajectory simulate_Z_truncated(double p, std::uint64_t h, const SimulateOptions& opt,
                                Rng& rng);

// Eigenvector of the truncated generator at eigenvalue 1, normalized to
// nu(0) = 1-p; coordinates 0..h+1 (the last is the over-weight coordinate).
// Solved two ways - dense Gaussian elimination of the (h+2)-dimensional
// system and the closed-form iteration - and the two must agree to 1e-12
// relative, else the solver throws.
std::vector<double> solve_truncated_eigenvector(double p, std::uint64_t h);

// The dense-solve route alone (exposed so tests can compare the two paths).
std::vector<double> solve_truncated_eigenvector_dense(double p, std::uint64_t h);

struct MalthusianEstimate {
  double slope = 0.0;         // regression of log N_t on t over the tail
  double scaled_final = 0.0;  // e^{-t} N_t at the final time
};

// Regression over the trajectory tail [t_end/2, t_end]; requires the
// trajectory to span at least min_t and the tail to hold two points.
MalthusianEstimate estimate_malthusian(const Trajectory& traj, double min_t = 1.0);

// <census, f> = sum over occupied classes of f(k) * count(k).
double pair_census(const ClusterCensus& census,
                   const std::function<double(std::uint64_t)>& f);

// CSV "t,k,count" rows of the recorded census snapshots.
std::string trajectory_census_csv(const Trajectory& traj);
// CSV "k,nu" rows of an eigenvector (or any per-class table).
std::string eigenvector_csv(const std::vector<double>& nu);

}  // namespace rrt
