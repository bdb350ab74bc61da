#include "h2plan/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace h2plan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double pow2_near(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) return 1.0;
  return std::exp2(std::round(std::log2(x)));
}
}  // namespace

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterLimit: return "iteration-limit";
    case LpStatus::Numerical: return "numerical-failure";
  }
  return "?";
}

struct LpEngine::Impl {
  const MilpInstance* inst = nullptr;
  Options opt;

  int n = 0;      // structural columns
  int m = 0;      // rows
  int total = 0;  // n + m with slacks appended

  // Scaled structural matrix, CSC.
  std::vector<int> colptr, rowidx;
  std::vector<double> vals;
  std::vector<double> rscale, cscale;   // row/column equilibration factors
  std::vector<double> base_lb, base_ub; // scaled bounds incl. slacks
  std::vector<double> cost;             // scaled objective incl. slacks
  std::vector<double> rhs;              // scaled right-hand side

  // Per-solve state.
  std::vector<double> lb, ub;
  std::vector<signed char> status;
  std::vector<int> basic;         // basis column per position
  std::vector<int> pos_in_basis;  // column -> basis position or -1
  std::vector<double> xval;       // current value per column

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool lu_ok = false;
  struct Eta {
    int pos = -1;
    double diag = 0.0;
    std::vector<std::pair<int, double>> off;
  };
  std::vector<Eta> etas;

  std::vector<signed char> last_status;

  Impl(const MilpInstance& instance, Options o) : inst(&instance), opt(o) {
    if (!instance.finalized())
      throw std::logic_error("LpEngine requires a finalized instance");
    n = instance.n_cols();
    m = instance.n_rows();
    total = n + m;
    build();
  }

  void build() {
    colptr.assign(n + 1, 0);
    for (int i = 0; i < m; ++i)
      for (const auto& e : inst->row(i).entries) colptr[e.col + 1]++;
    for (int j = 0; j < n; ++j) colptr[j + 1] += colptr[j];
    rowidx.resize(colptr[n]);
    vals.resize(colptr[n]);
    {
      std::vector<int> next(colptr.begin(), colptr.end() - 1);
      for (int i = 0; i < m; ++i)
        for (const auto& e : inst->row(i).entries) {
          int k = next[e.col]++;
          rowidx[k] = i;
          vals[k] = e.coef;
        }
    }
    // Entries within a column arrive in row order because rows were scanned in
    // order; nothing further needed for determinism.

    rscale.assign(m, 1.0);
    cscale.assign(n, 1.0);
    for (int pass = 0; pass < 3; ++pass) {
      std::vector<double> colmax(n, 0.0);
      for (int j = 0; j < n; ++j)
        for (int k = colptr[j]; k < colptr[j + 1]; ++k)
          colmax[j] = std::max(colmax[j], std::fabs(vals[k]) * rscale[rowidx[k]] *
                                              cscale[j]);
      // Binary columns keep unit scale so integrality still reads off
      // directly; the row pass absorbs their large coefficients instead.
      for (int j = 0; j < n; ++j)
        if (colmax[j] > 0.0 && !inst->col(j).binary)
          cscale[j] /= pow2_near(colmax[j]);
      std::vector<double> rowmax(m, 0.0);
      for (int j = 0; j < n; ++j)
        for (int k = colptr[j]; k < colptr[j + 1]; ++k)
          rowmax[rowidx[k]] =
              std::max(rowmax[rowidx[k]],
                       std::fabs(vals[k]) * rscale[rowidx[k]] * cscale[j]);
      for (int i = 0; i < m; ++i)
        if (rowmax[i] > 0.0) rscale[i] /= pow2_near(rowmax[i]);
    }
    for (int j = 0; j < n; ++j)
      for (int k = colptr[j]; k < colptr[j + 1]; ++k)
        vals[k] *= rscale[rowidx[k]] * cscale[j];

    base_lb.assign(total, 0.0);
    base_ub.assign(total, 0.0);
    cost.assign(total, 0.0);
    for (int j = 0; j < n; ++j) {
      const Column& c = inst->col(j);
      base_lb[j] = c.lb / cscale[j];
      base_ub[j] = c.ub / cscale[j];
      cost[j] = c.obj * cscale[j];
    }
    rhs.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const Row& r = inst->row(i);
      rhs[i] = r.rhs * rscale[i];
      int sj = n + i;
      switch (r.sense) {
        case RowSense::LE: base_lb[sj] = 0.0; base_ub[sj] = kInf; break;
        case RowSense::EQ: base_lb[sj] = 0.0; base_ub[sj] = 0.0; break;
        case RowSense::GE: base_lb[sj] = -kInf; base_ub[sj] = 0.0; break;
      }
    }
  }

  // --- columns --------------------------------------------------------------

  template <typename F>
  void scan_col(int j, F&& f) const {
    if (j < n) {
      for (int k = colptr[j]; k < colptr[j + 1]; ++k) f(rowidx[k], vals[k]);
    } else {
      f(j - n, 1.0);
    }
  }

  double dot_col(int j, const std::vector<double>& y) const {
    if (j >= n) return y[j - n];
    double acc = 0.0;
    for (int k = colptr[j]; k < colptr[j + 1]; ++k) acc += vals[k] * y[rowidx[k]];
    return acc;
  }

  // --- factorization --------------------------------------------------------

  bool refactor() {
    Eigen::SparseMatrix<double> B(m, m);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(m) * 4);
    for (int p = 0; p < m; ++p)
      scan_col(basic[p], [&](int i, double v) { trips.emplace_back(i, p, v); });
    B.setFromTriplets(trips.begin(), trips.end());
    lu.analyzePattern(B);
    lu.factorize(B);
    lu_ok = lu.info() == Eigen::Success;
    etas.clear();
    return lu_ok;
  }

  void ftran(Eigen::VectorXd& v) {
    v = lu.solve(v);
    for (const auto& e : etas) {
      double g = v[e.pos] / e.diag;
      if (g != 0.0) {
        v[e.pos] = g;
        for (const auto& [i, a] : e.off) v[i] -= a * g;
      } else {
        v[e.pos] = 0.0;
      }
    }
  }

  void btran(Eigen::VectorXd& v) {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double acc = v[it->pos];
      for (const auto& [i, a] : it->off) acc -= a * v[i];
      v[it->pos] = acc / it->diag;
    }
    v = lu.adjoint().solve(v);
  }

  void recompute_basics() {
    Eigen::VectorXd r(m);
    for (int i = 0; i < m; ++i) r[i] = rhs[i];
    for (int j = 0; j < total; ++j) {
      if (status[j] == kBasic) continue;
      double xj = xval[j];
      if (xj != 0.0) scan_col(j, [&](int i, double v) { r[i] -= v * xj; });
    }
    ftran(r);
    for (int p = 0; p < m; ++p) xval[basic[p]] = r[p];
  }

  double nonbasic_value(int j) const {
    switch (status[j]) {
      case kAtLower: return lb[j];
      case kAtUpper: return ub[j];
      default: return 0.0;
    }
  }

  double infeas_sum() const {
    double s = 0.0;
    for (int p = 0; p < m; ++p) {
      int j = basic[p];
      if (xval[j] < lb[j]) s += lb[j] - xval[j];
      else if (xval[j] > ub[j]) s += xval[j] - ub[j];
    }
    return s;
  }

  bool basics_finite() const {
    for (int p = 0; p < m; ++p)
      if (!std::isfinite(xval[basic[p]])) return false;
    return true;
  }

  // Rebuilds the factorization and the basic values from scratch. Returns
  // false when the basis itself is beyond repair.
  bool recover_numeric() {
    if (!refactor()) return false;
    recompute_basics();
    return basics_finite();
  }

  // Rows where fixings leave at most one free column collapse to plain
  // bounds on that column (or to a constant consistency check). Folding
  // them into the bound arrays before the iteration loop keeps rows built
  // around huge activation coefficients from ever reaching phase 1 with a
  // violated slack: a start inside the tightened box satisfies them by
  // construction. Iterated because each new fixing can expose more rows.
  // Returns false when a fixed pattern contradicts a row outright.
  bool presolve_bounds() {
    const double ftol = opt.feas_tol;
    for (int pass = 0; pass < 20; ++pass) {
      bool changed = false;
      for (int i = 0; i < m; ++i) {
        const Row& r = inst->row(i);
        int nfree = 0, jfree = -1;
        double afree = 0.0;
        double resid = rhs[i];
        bool any_fixed = false;
        for (const auto& e : r.entries) {
          double a = e.coef * rscale[i] * cscale[e.col];
          if (lb[e.col] == ub[e.col]) {
            resid -= a * lb[e.col];
            any_fixed = true;
          } else {
            if (++nfree > 1) break;
            jfree = e.col;
            afree = a;
          }
        }
        if (!any_fixed || nfree > 1) continue;
        if (nfree == 0) {
          double tol = ftol * std::max(1.0, std::fabs(rhs[i]));
          if ((r.sense == RowSense::LE && resid < -tol) ||
              (r.sense == RowSense::GE && resid > tol) ||
              (r.sense == RowSense::EQ && std::fabs(resid) > tol))
            return false;
          continue;
        }
        if (afree == 0.0) continue;
        double v = resid / afree;
        bool cap_above = (r.sense == RowSense::EQ) ||
                         (r.sense == RowSense::LE && afree > 0.0) ||
                         (r.sense == RowSense::GE && afree < 0.0);
        bool cap_below = (r.sense == RowSense::EQ) ||
                         (r.sense == RowSense::LE && afree < 0.0) ||
                         (r.sense == RowSense::GE && afree > 0.0);
        if (cap_above && v < ub[jfree]) {
          ub[jfree] = v;
          changed = true;
        }
        if (cap_below && v > lb[jfree]) {
          lb[jfree] = v;
          changed = true;
        }
        if (lb[jfree] > ub[jfree]) {
          double tol = ftol * std::max(1.0, std::fabs(v));
          if (lb[jfree] - ub[jfree] > tol) return false;
          lb[jfree] = ub[jfree] = 0.5 * (lb[jfree] + ub[jfree]);
        }
      }
      if (!changed) break;
    }
    return true;
  }

  // --- main loop ------------------------------------------------------------

  LpSolution run(const std::vector<BoundFix>& fixes,
                 const std::vector<signed char>* warm) {
    lb = base_lb;
    ub = base_ub;
    for (const auto& f : fixes) {
      if (f.col < 0 || f.col >= n) throw std::invalid_argument("bad bound fix");
      lb[f.col] = f.lb / cscale[f.col];
      ub[f.col] = f.ub / cscale[f.col];
      if (lb[f.col] > ub[f.col]) throw std::invalid_argument("crossed bound fix");
    }

    if (!presolve_bounds()) {
      LpSolution sol;
      sol.status = LpStatus::Infeasible;
      sol.x.assign(n, 0.0);
      sol.duals.assign(m, 0.0);
      sol.reduced_costs.assign(n, 0.0);
      return sol;
    }

    status.assign(total, kAtLower);
    bool warm_ok = false;
    if (warm && static_cast<int>(warm->size()) == total) {
      int nb = 0;
      for (int j = 0; j < total; ++j)
        if ((*warm)[j] == kBasic) nb++;
      if (nb == m) {
        status = *warm;
        warm_ok = true;
      }
    }
    if (!warm_ok) {
      for (int j = 0; j < n; ++j) status[j] = initial_status(j);
      for (int i = 0; i < m; ++i) status[n + i] = kBasic;
    } else {
      for (int j = 0; j < total; ++j) {
        if (status[j] == kBasic) continue;
        status[j] = repair_status(j, status[j]);
      }
    }

    basic.clear();
    basic.reserve(m);
    pos_in_basis.assign(total, -1);
    for (int j = 0; j < total; ++j)
      if (status[j] == kBasic) {
        pos_in_basis[j] = static_cast<int>(basic.size());
        basic.push_back(j);
      }

    LpSolution sol;
    if (!refactor()) {
      // A warm basis can be singular after bound flips; retry cold.
      for (int j = 0; j < n; ++j) status[j] = initial_status(j);
      for (int i = 0; i < m; ++i) status[n + i] = kBasic;
      basic.clear();
      pos_in_basis.assign(total, -1);
      for (int i = 0; i < m; ++i) {
        pos_in_basis[n + i] = i;
        basic.push_back(n + i);
      }
      if (!refactor()) {
        sol.status = LpStatus::Numerical;
        return sol;
      }
    }

    xval.assign(total, 0.0);
    for (int j = 0; j < total; ++j)
      if (status[j] != kBasic) xval[j] = nonbasic_value(j);
    recompute_basics();

    const double ftol = opt.feas_tol;
    const double dtol = opt.opt_tol;
    bool bland = false;
    long stall = 0;
    double last_obj = kInf;
    long iters = 0;
    int recoveries = 0;
    int verify_rounds = 0;
    bool tight_sweep = false;
    bool was_phase1 = true;
    int pivots_since_refactor = 0;

    // Columns whose best available pivot is tiny get banned for the current
    // basis: pivoting on them wrecks the conditioning of the factorization
    // and every dual computed afterwards. The ban list clears on the next
    // actual basis change. If every candidate ends up banned the least bad
    // pivot is accepted anyway, followed by an immediate refactorization so
    // the damage cannot compound.
    std::vector<char> column_banned(total, 0);
    std::vector<int> banned_cols;
    bool accept_tiny = false;
    const double tiny_piv = 1e-7;

    Eigen::VectorXd ydense(m), alpha(m);

    while (true) {
      if (iters >= opt.max_iters) {
        sol.status = LpStatus::IterLimit;
        sol.iterations = iters;
        return sol;
      }
      ++iters;

      if (!basics_finite()) {
        if (++recoveries > 20 || !recover_numeric()) {
          sol.status = LpStatus::Numerical;
          sol.iterations = iters;
          return sol;
        }
      }

      double infeas = infeas_sum();
      bool phase1 = infeas > ftol;
      if (phase1 != was_phase1) {
        was_phase1 = phase1;
        stall = 0;
        last_obj = kInf;
      }

      // Duals for the active cost vector.
      for (int i = 0; i < m; ++i) {
        int j = basic[i];
        if (phase1) {
          if (xval[j] < lb[j] - ftol) ydense[i] = -1.0;
          else if (xval[j] > ub[j] + ftol) ydense[i] = 1.0;
          else ydense[i] = 0.0;
        } else {
          ydense[i] = cost[j];
        }
      }
      std::vector<double> y(m);
      {
        Eigen::VectorXd tmp = ydense;
        btran(tmp);
        if (!tmp.allFinite()) {
          if (++recoveries > 20 || !recover_numeric()) {
            sol.status = LpStatus::Numerical;
            sol.iterations = iters;
            return sol;
          }
          continue;
        }
        for (int i = 0; i < m; ++i) y[i] = tmp[i];
      }

      // Pricing. A terminal claim (no entering column) is only trusted after
      // a re-price at tight tolerance on freshly refactored duals; badly
      // scaled columns can stall below the working tolerance while genuine
      // descent directions remain. An infeasibility claim gets the strictest
      // treatment: columns spanning many orders of magnitude can leave the
      // escape direction with a reduced cost far below any fixed tolerance
      // yet a range long enough to remove the whole infeasibility, so any
      // strictly negative sign blocks the claim.
      const double price_tol = tight_sweep ? (phase1 ? 0.0 : 1e-12) : dtol;
      const bool bland_now = bland || tight_sweep;
      int q = -1;
      double best = 0.0;
      double dq = 0.0;
      for (int j = 0; j < total; ++j) {
        signed char st = status[j];
        if (st == kBasic) continue;
        if (lb[j] == ub[j]) continue;  // fixed
        if (column_banned[j]) continue;
        double cj = phase1 ? 0.0 : cost[j];
        double dj = cj - dot_col(j, y);
        bool elig = (st == kAtLower && dj < -price_tol) ||
                    (st == kAtUpper && dj > price_tol) ||
                    (st == kFreeNb && std::fabs(dj) > price_tol);
        if (!elig) continue;
        if (bland_now) {
          q = j;
          dq = dj;
          break;
        }
        double score = std::fabs(dj);
        if (score > best + 1e-15) {
          best = score;
          q = j;
          dq = dj;
        }
      }

      if (q < 0) {
        if (!banned_cols.empty()) {
          for (int jb : banned_cols) column_banned[jb] = 0;
          banned_cols.clear();
          accept_tiny = true;
          continue;
        }
        if (!tight_sweep && verify_rounds < 50 && recover_numeric()) {
          ++verify_rounds;
          tight_sweep = true;
          continue;
        }
        if (phase1) {
          sol.status = LpStatus::Infeasible;
          sol.iterations = iters;
          finalize_solution(sol, false);
          return sol;
        }
        sol.status = LpStatus::Optimal;
        sol.iterations = iters;
        finalize_solution(sol, true);
        return sol;
      }

      double sigma = (status[q] == kAtUpper) ? -1.0 : (status[q] == kAtLower ? 1.0
                                                       : (dq < 0.0 ? 1.0 : -1.0));

      alpha.setZero();
      scan_col(q, [&](int i, double v) { alpha[i] = v; });
      ftran(alpha);
      if (!alpha.allFinite()) {
        if (++recoveries > 20 || !recover_numeric()) {
          sol.status = LpStatus::Numerical;
          sol.iterations = iters;
          return sol;
        }
        continue;
      }

      // Ratio test: two-pass with a small tolerance, preferring large pivots.
      const double piv_tol = 1e-11;
      double t_relaxed = kInf;
      int self_block = -1;
      if (std::isfinite(lb[q]) && std::isfinite(ub[q])) {
        double span = ub[q] - lb[q];
        if (span < t_relaxed) {
          t_relaxed = span;
          self_block = q;
        }
      }
      auto blocking_bound = [&](int j, double a, bool relaxed, double& bound) {
        // Variable j moves by -t*a. Returns false when unblocked.
        if (a > 0.0) {  // decreasing
          if (xval[j] > ub[j] + ftol) { bound = ub[j]; }
          else if (xval[j] >= lb[j] - ftol) {
            if (!std::isfinite(lb[j])) return false;
            bound = lb[j];
          } else return false;  // infeasible below, moving further down
          if (relaxed) bound -= ftol;
          return true;
        } else {  // increasing
          if (xval[j] < lb[j] - ftol) { bound = lb[j]; }
          else if (xval[j] <= ub[j] + ftol) {
            if (!std::isfinite(ub[j])) return false;
            bound = ub[j];
          } else return false;
          if (relaxed) bound += ftol;
          return true;
        }
      };

      for (int p = 0; p < m; ++p) {
        double a = sigma * alpha[p];
        if (std::fabs(a) < piv_tol) continue;
        int j = basic[p];
        double bound;
        if (!blocking_bound(j, a, true, bound)) continue;
        double t = (xval[j] - bound) / a;
        if (t < 0.0) t = 0.0;
        if (t < t_relaxed) t_relaxed = t;
      }

      int leave_pos = -1;
      if (!bland_now) {
        double best_piv = 0.0;
        for (int p = 0; p < m; ++p) {
          double a = sigma * alpha[p];
          if (std::fabs(a) < piv_tol) continue;
          int j = basic[p];
          double bound;
          if (!blocking_bound(j, a, false, bound)) continue;
          double t = std::max(0.0, (xval[j] - bound) / a);
          if (t <= t_relaxed + 1e-12) {
            double piv = std::fabs(a);
            if (piv > best_piv + 1e-15 ||
                (piv > best_piv - 1e-15 && (leave_pos < 0 || j < basic[leave_pos]))) {
              best_piv = piv;
              leave_pos = p;
            }
          }
        }
      } else {
        double t_min = kInf;
        for (int p = 0; p < m; ++p) {
          double a = sigma * alpha[p];
          if (std::fabs(a) < piv_tol) continue;
          int j = basic[p];
          double bound;
          if (!blocking_bound(j, a, false, bound)) continue;
          double t = std::max(0.0, (xval[j] - bound) / a);
          if (t < t_min - 1e-12 ||
              (t < t_min + 1e-12 && (leave_pos < 0 || j < basic[leave_pos]))) {
            t_min = t;
            leave_pos = p;
          }
        }
      }

      bool self = false;
      double step;
      double leave_bound = 0.0;
      if (leave_pos < 0) {
        if (self_block >= 0) {
          self = true;
          step = ub[q] - lb[q];
        } else {
          sol.status = phase1 ? LpStatus::Numerical : LpStatus::Unbounded;
          sol.iterations = iters;
          return sol;
        }
      } else {
        int jl = basic[leave_pos];
        double a = sigma * alpha[leave_pos];
        if (!blocking_bound(jl, a, false, leave_bound)) {
          // Selection guaranteed a blocker; treat disagreement as numerics.
          if (++recoveries > 20 || !recover_numeric()) {
            sol.status = LpStatus::Numerical;
            sol.iterations = iters;
            return sol;
          }
          continue;
        }
        step = std::max(0.0, (xval[jl] - leave_bound) / a);
        if (self_block >= 0 && ub[q] - lb[q] < step) {
          self = true;
          step = ub[q] - lb[q];
        }
      }

      if (!self && leave_pos >= 0 && !accept_tiny) {
        double apiv = std::fabs(alpha[leave_pos]);
        double anorm = alpha.cwiseAbs().maxCoeff();
        if (apiv < tiny_piv * (1.0 + anorm)) {
          column_banned[q] = 1;
          banned_cols.push_back(q);
          if (static_cast<int>(banned_cols.size()) <= 50) continue;
          // Too many bans at one basis: give up on avoidance, take the
          // least bad option from here on.
          for (int jb : banned_cols) column_banned[jb] = 0;
          banned_cols.clear();
          accept_tiny = true;
          continue;
        }
      }

      if (!std::isfinite(step)) {
        if (++recoveries > 20 || !recover_numeric()) {
          sol.status = LpStatus::Numerical;
          sol.iterations = iters;
          return sol;
        }
        continue;
      }

      // Apply the step.
      for (int p = 0; p < m; ++p) {
        double a = alpha[p];
        if (a != 0.0) xval[basic[p]] -= step * sigma * a;
      }
      xval[q] += sigma * step;

      if (self) {
        status[q] = (sigma > 0.0) ? kAtUpper : kAtLower;
        xval[q] = (sigma > 0.0) ? ub[q] : lb[q];
      } else {
        int jl = basic[leave_pos];
        // Leaving variable lands exactly on the bound that blocked it,
        // captured before the step moved anything.
        status[jl] = (leave_bound == lb[jl] ||
                      (std::isfinite(lb[jl]) &&
                       std::fabs(leave_bound - lb[jl]) < 1e-12))
                         ? kAtLower
                         : kAtUpper;
        xval[jl] = (status[jl] == kAtLower) ? lb[jl] : ub[jl];
        status[q] = kBasic;
        pos_in_basis[q] = leave_pos;
        pos_in_basis[jl] = -1;
        basic[leave_pos] = q;

        Eta e;
        e.pos = leave_pos;
        e.diag = alpha[leave_pos];
        for (int p = 0; p < m; ++p)
          if (p != leave_pos && std::fabs(alpha[p]) > 1e-14)
            e.off.emplace_back(p, alpha[p]);
        if (std::fabs(e.diag) < tiny_piv * (1.0 + alpha.cwiseAbs().maxCoeff())) {
          // A tiny pivot made it into the basis (forced or defensive).
          // Refactorize immediately instead of stacking its eta, so the
          // update error stays confined to this one step.
          if (!refactor()) {
            sol.status = LpStatus::Numerical;
            sol.iterations = iters;
            return sol;
          }
          pivots_since_refactor = 0;
          recompute_basics();
        } else {
          etas.push_back(std::move(e));
          if (++pivots_since_refactor >= opt.refactor_every ||
              static_cast<int>(etas.size()) >= opt.refactor_every) {
            if (!refactor()) {
              sol.status = LpStatus::Numerical;
              sol.iterations = iters;
              return sol;
            }
            pivots_since_refactor = 0;
            recompute_basics();
          }
        }
      }

      // A step was taken: bans and sweep modes apply to the old basis only.
      if (!banned_cols.empty()) {
        for (int jb : banned_cols) column_banned[jb] = 0;
        banned_cols.clear();
      }
      accept_tiny = false;
      tight_sweep = false;

      // Stall detection drives the Bland fallback.
      double obj_now = phase1 ? infeas : current_obj();
      if (obj_now < last_obj - 1e-12) {
        stall = 0;
        last_obj = obj_now;
      } else if (++stall > 5000) {
        bland = true;
      }
    }
  }

  signed char initial_status(int j) const {
    bool lf = std::isfinite(lb[j]), uf = std::isfinite(ub[j]);
    if (lf && uf) return std::fabs(lb[j]) <= std::fabs(ub[j]) ? kAtLower : kAtUpper;
    if (lf) return kAtLower;
    if (uf) return kAtUpper;
    return kFreeNb;
  }

  signed char repair_status(int j, signed char st) const {
    bool lf = std::isfinite(lb[j]), uf = std::isfinite(ub[j]);
    if (st == kAtLower && !lf) st = uf ? kAtUpper : kFreeNb;
    if (st == kAtUpper && !uf) st = lf ? kAtLower : kFreeNb;
    if (st == kFreeNb && (lf || uf)) st = lf ? kAtLower : kAtUpper;
    return st;
  }

  double current_obj() const {
    double o = 0.0;
    for (int j = 0; j < total; ++j) o += cost[j] * xval[j];
    return o;
  }

  void finalize_solution(LpSolution& sol, bool optimal) {
    if (!refactor()) {
      sol.status = LpStatus::Numerical;
      return;
    }
    recompute_basics();
    if (!basics_finite()) {
      sol.status = LpStatus::Numerical;
      return;
    }

    sol.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
      double v = xval[j] * cscale[j];
      const Column& c = inst->col(j);
      if (v < c.lb && v > c.lb - 1e-7 * (1.0 + std::fabs(c.lb))) v = c.lb;
      if (v > c.ub && v < c.ub + 1e-7 * (1.0 + std::fabs(c.ub))) v = c.ub;
      sol.x[j] = v;
    }
    sol.objective = 0.0;
    for (int j = 0; j < n; ++j) sol.objective += inst->col(j).obj * sol.x[j];

    Eigen::VectorXd yv(m);
    for (int i = 0; i < m; ++i) yv[i] = cost[basic[i]];
    btran(yv);
    sol.duals.assign(m, 0.0);
    for (int i = 0; i < m; ++i) sol.duals[i] = yv[i] * rscale[i];
    std::vector<double> y(yv.data(), yv.data() + m);
    sol.reduced_costs.assign(n, 0.0);
    for (int j = 0; j < n; ++j)
      sol.reduced_costs[j] = (cost[j] - dot_col(j, y)) / cscale[j];

    double resid = 0.0;
    for (int i = 0; i < m; ++i) {
      const Row& r = inst->row(i);
      double act = 0.0;
      for (const auto& e : r.entries) act += e.coef * sol.x[e.col];
      double v = 0.0;
      switch (r.sense) {
        case RowSense::LE: v = std::max(0.0, act - r.rhs); break;
        case RowSense::GE: v = std::max(0.0, r.rhs - act); break;
        case RowSense::EQ: v = std::fabs(act - r.rhs); break;
      }
      resid = std::max(resid, v);
    }
    sol.primal_residual = resid;
    (void)optimal;
    last_status = status;
  }
};

LpEngine::LpEngine(const MilpInstance& inst, Options opt)
    : impl_(std::make_unique<Impl>(inst, opt)) {}

LpEngine::~LpEngine() = default;

LpSolution LpEngine::solve(const std::vector<BoundFix>& fixes,
                           const std::vector<signed char>* warm) {
  return impl_->run(fixes, warm);
}

const std::vector<signed char>& LpEngine::last_basis() const {
  return impl_->last_status;
}

LpSolution solve_lp(const MilpInstance& inst, LpEngine::Options opt) {
  LpEngine engine(inst, opt);
  return engine.solve();
}

}  // namespace h2plan
