#pragma once

#include <functional>
#include <string>
#include <vector>

#include "h2plan/milp.hpp"
#include "h2plan/simplex.hpp"

namespace h2plan {

enum class MilpStatus { Optimal, GapLimit, Infeasible, Limit, Numerical };

const char* to_string(MilpStatus s);

struct MilpOptions {
  double gap = 1e-6;        // relative optimality gap to prove
  double int_tol = 1e-6;    // binaries within this of 0/1 count as integral
  long node_limit = 0;      // 0 = unlimited
  double time_limit = 0.0;  // wall seconds, 0 = unlimited
  LpEngine::Options lp;
  std::function<void(const std::string&)> log;  // optional progress sink
};

struct MilpSolution {
  MilpStatus status = MilpStatus::Numerical;
  double objective = 0.0;  // incumbent objective when has_incumbent
  double bound = 0.0;      // best proven lower bound at exit
  double gap = 0.0;        // relative gap at exit
  std::vector<double> x;   // incumbent, structural columns
  long nodes = 0;
  long lp_iterations = 0;
  bool has_incumbent = false;
};

// Branch and bound over the LP relaxation. Node selection is best-bound with
// plunging: after branching, the child on the LP's preferred side is processed
// immediately and the sibling joins the heap. Branching prefers fractional
// structural binaries (most fractional); when those are integral it picks the
// piecewise-linear term whose (x, y) pair strays furthest from its interpolant
// and branches on the ordering binary nearest the LP point, which splits the
// term's domain spatially. Every incumbent comes from an LP with all binaries
// fixed to exact 0/1 bounds, so big-M rows hold exactly. Deterministic for a
// fixed instance when no time limit triggers.
MilpSolution solve_milp(const MilpInstance& inst, const MilpOptions& opt = {});

// Exhaustive reference for tests: enumerate every assignment of the free
// binaries (at most 20) in ascending mask order and keep the best LP.
MilpSolution brute_force_enumerate(const MilpInstance& inst,
                                   const LpEngine::Options& lp = {});

}  // namespace h2plan
