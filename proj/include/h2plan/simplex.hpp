#pragma once

#include <memory>
#include <vector>

#include "h2plan/milp.hpp"

namespace h2plan {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit, Numerical };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Numerical;
  double objective = 0.0;
  std::vector<double> x;              // structural column values
  std::vector<double> duals;          // one per row
  std::vector<double> reduced_costs;  // one per structural column
  double primal_residual = 0.0;       // max constraint violation
  long iterations = 0;
};

struct BoundFix {
  int col = -1;
  double lb = 0.0;
  double ub = 0.0;
};

// Basis status codes used for warm starts.
enum : signed char { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFreeNb = 3 };

// Bounded-variable primal simplex over a finalized MilpInstance with binaries
// relaxed to their interval bounds. Phase 1 minimizes the sum of primal
// infeasibilities from any starting basis, which doubles as the warm-start
// repair inside branch and bound. Deterministic by construction: Dantzig
// pricing with lowest-index ties, Harris-style two-pass ratio test, Bland's
// rule after a stall, power-of-two equilibration scaling, sparse LU basis
// factorization with product-form updates and periodic refactorization.
class LpEngine {
 public:
  struct Options {
    double feas_tol = 1e-7;
    double opt_tol = 1e-7;
    long max_iters = 2000000;
    int refactor_every = 100;
  };

  explicit LpEngine(const MilpInstance& inst) : LpEngine(inst, Options{}) {}
  LpEngine(const MilpInstance& inst, Options opt);
  ~LpEngine();
  LpEngine(const LpEngine&) = delete;
  LpEngine& operator=(const LpEngine&) = delete;

  // `fixes` tightens column bounds for this solve only (original units).
  // `warm` supplies basis statuses from a previous solve on the same engine.
  LpSolution solve(const std::vector<BoundFix>& fixes = {},
                   const std::vector<signed char>* warm = nullptr);

  // Basis statuses after the last solve (size n_structural + n_rows).
  const std::vector<signed char>& last_basis() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience wrapper: solve the LP relaxation of `inst`.
LpSolution solve_lp(const MilpInstance& inst, LpEngine::Options opt = {});

}  // namespace h2plan
