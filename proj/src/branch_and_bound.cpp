#include "h2plan/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace h2plan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double frac_part(double v) { return std::fabs(v - std::round(v)); }

struct Node {
  long id = 0;
  double bound = -kInf;
  std::vector<std::pair<int, signed char>> fixes;
};

// Min-heap on bound, FIFO on ties; strict total order keeps runs reproducible.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::GapLimit: return "gap-limit";
    case MilpStatus::Infeasible: return "infeasible";
    case MilpStatus::Limit: return "limit";
    case MilpStatus::Numerical: return "numerical-failure";
  }
  return "?";
}

MilpSolution solve_milp(const MilpInstance& inst, const MilpOptions& opt) {
  if (!inst.finalized())
    throw std::logic_error("solve_milp requires a finalized instance");

  const int n = inst.n_cols();
  LpEngine engine(inst, opt.lp);
  const auto t_start = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start)
        .count();
  };

  std::vector<int> bins;  // branchable binaries, ascending column index
  for (int j = 0; j < n; ++j)
    if (inst.col(j).binary && inst.col(j).lb < inst.col(j).ub) bins.push_back(j);

  std::vector<char> is_fill(n, 0);
  for (const auto& t : inst.pwl_terms())
    for (int c : t.fill_cols) is_fill[c] = 1;

  long lp_iters = 0;
  auto solve_with = [&](const std::vector<std::pair<int, signed char>>& fixes,
                        bool warm) {
    std::vector<BoundFix> bf;
    bf.reserve(fixes.size());
    for (const auto& [c, v] : fixes)
      bf.push_back({c, static_cast<double>(v), static_cast<double>(v)});
    const std::vector<signed char>* wb =
        (warm && !engine.last_basis().empty()) ? &engine.last_basis() : nullptr;
    LpSolution s = engine.solve(bf, wb);
    if (s.status == LpStatus::Numerical || s.status == LpStatus::IterLimit) {
      lp_iters += s.iterations;
      s = engine.solve(bf, nullptr);  // cold retry before giving up
    }
    lp_iters += s.iterations;
    return s;
  };

  double inc = kInf;
  std::vector<double> inc_x;
  bool has_inc = false;
  auto cutoff = [&] { return inc - 1e-9 * std::max(1.0, std::fabs(inc)); };

  // Extend a node's fixes to every branchable binary by projecting the LP
  // point onto an integral pattern: each choice group keeps its largest
  // member, interpolation ordering binaries take the prefix pattern of the
  // segment under the interpolated variable, anything else rounds. The
  // projection respects fixes already present in the node.
  auto completion = [&](const std::vector<std::pair<int, signed char>>& nf,
                        const std::vector<double>& x) {
    std::vector<signed char> val(n, -1);
    for (const auto& [c, v] : nf) val[c] = v;
    for (const auto& g : inst.choice_groups()) {
      double pinned = 0.0;
      int pick = -1;
      double best = -kInf;
      for (int c : g) {
        if (inst.col(c).lb >= inst.col(c).ub) {
          pinned += inst.col(c).lb;
          continue;
        }
        if (val[c] == 1) {
          pick = c;
          best = kInf;
        } else if (val[c] != 0 && x[c] > best + 1e-15) {
          best = x[c];
          pick = c;
        }
      }
      if (pinned >= 0.5) pick = -1;
      for (int c : g) {
        if (inst.col(c).lb >= inst.col(c).ub) continue;
        if (val[c] < 0) val[c] = (c == pick) ? 1 : 0;
      }
    }
    for (const auto& t : inst.pwl_terms()) {
      if (t.fill_cols.empty()) continue;
      int nz = static_cast<int>(t.fill_cols.size());
      int s_lo = 0, s_hi = nz;  // allowed segment range under node fixes
      for (int k = 0; k < nz; ++k) {
        signed char v = val[t.fill_cols[k]];
        if (v == 1) s_lo = std::max(s_lo, k + 1);
        else if (v == 0) s_hi = std::min(s_hi, k);
      }
      int s = t.segment_of(x[t.x_col]);
      s = std::clamp(s, s_lo, std::max(s_lo, s_hi));
      for (int k = 0; k < nz; ++k)
        if (val[t.fill_cols[k]] < 0) val[t.fill_cols[k]] = (k < s) ? 1 : 0;
    }
    std::vector<std::pair<int, signed char>> full;
    full.reserve(bins.size());
    for (int c : bins) {
      signed char v = val[c];
      if (v < 0) v = (x[c] >= 0.5) ? 1 : 0;
      full.emplace_back(c, v);
    }
    return full;
  };

  // Solve with every binary fixed; accept as incumbent when it improves.
  // Returns {solved, objective} so callers can close subtrees on a match.
  auto try_incumbent =
      [&](const std::vector<std::pair<int, signed char>>& full)
      -> std::pair<bool, double> {
    LpSolution s = solve_with(full, true);
    if (s.status != LpStatus::Optimal) return {false, kInf};
    if (!has_inc || s.objective < inc - 1e-12 * std::max(1.0, std::fabs(inc))) {
      inc = s.objective;
      inc_x = s.x;
      has_inc = true;
      if (opt.log) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "incumbent %.9g", inc);
        opt.log(buf);
      }
    }
    return {true, s.objective};
  };

  auto select_branch = [&](const std::vector<double>& x, double tol) -> int {
    int best = -1;
    double bf = tol;
    for (int c : bins) {
      if (is_fill[c]) continue;
      double f = frac_part(x[c]);
      if (f > bf + 1e-15) {
        bf = f;
        best = c;
      }
    }
    if (best >= 0) return best;

    const auto& terms = inst.pwl_terms();
    int bt = -1;
    double bv = 1e-7;
    for (int i = 0; i < static_cast<int>(terms.size()); ++i) {
      const auto& t = terms[i];
      if (t.fill_cols.empty()) continue;
      double span = std::max(t.value_span(), 1e-9);
      double v = std::fabs(x[t.y_col] - t.interp(x[t.x_col])) / span;
      if (v > bv + 1e-15) {
        bv = v;
        bt = i;
      }
    }
    if (bt >= 0) {
      const auto& t = terms[bt];
      int nz = static_cast<int>(t.fill_cols.size());
      int anchor = std::min(t.segment_of(x[t.x_col]), nz - 1);
      int bz = -1, bdist = 0;
      double bzf = 0.0;
      for (int k = 0; k < nz; ++k) {
        double f = frac_part(x[t.fill_cols[k]]);
        if (f <= tol) continue;
        int dist = std::abs(k - anchor);
        if (bz < 0 || dist < bdist || (dist == bdist && f > bzf + 1e-15)) {
          bz = k;
          bdist = dist;
          bzf = f;
        }
      }
      if (bz >= 0) return t.fill_cols[bz];
    }

    for (int c : bins) {
      double f = frac_part(x[c]);
      if (f > bf + 1e-15) {
        bf = f;
        best = c;
      }
    }
    return best;
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> heap;
  Node next_node;
  bool have_next = false;
  long id_counter = 0;
  long nodes = 0;

  heap.push(Node{id_counter++, -kInf, {}});

  auto open_bound = [&] {
    double b = kInf;
    if (have_next) b = std::min(b, next_node.bound);
    if (!heap.empty()) b = std::min(b, heap.top().bound);
    return b;
  };
  auto rel_gap = [&](double b) {
    if (!has_inc) return kInf;
    if (b >= inc) return 0.0;
    return (inc - b) / std::max(std::fabs(inc), 1e-9);
  };
  const double gap_target = std::max(opt.gap, 1e-6);

  MilpStatus status = MilpStatus::Numerical;
  double final_bound = -kInf;

  while (true) {
    if (!have_next && heap.empty()) {
      status = has_inc ? MilpStatus::Optimal : MilpStatus::Infeasible;
      final_bound = has_inc ? inc : kInf;
      break;
    }
    double b_open = std::min(open_bound(), has_inc ? inc : kInf);
    double g = rel_gap(b_open);
    if (has_inc && g <= gap_target + 1e-15) {
      status = (g <= 1e-6 + 1e-15) ? MilpStatus::Optimal : MilpStatus::GapLimit;
      final_bound = b_open;
      break;
    }
    if ((opt.node_limit > 0 && nodes >= opt.node_limit) ||
        (opt.time_limit > 0.0 && seconds() >= opt.time_limit)) {
      status = MilpStatus::Limit;
      final_bound = b_open;
      break;
    }

    Node nd;
    if (have_next) {
      nd = std::move(next_node);
      have_next = false;
    } else {
      nd = heap.top();
      heap.pop();
    }
    if (has_inc && nd.bound >= cutoff()) continue;

    LpSolution s = solve_with(nd.fixes, true);
    ++nodes;
    if (s.status == LpStatus::Infeasible) continue;
    if (s.status != LpStatus::Optimal) {
      status = MilpStatus::Numerical;
      final_bound = std::min(open_bound(), has_inc ? inc : kInf);
      break;
    }
    double nb = std::max(s.objective, nd.bound);
    if (has_inc && nb >= cutoff()) continue;

    if (nodes == 1 || nodes % 20 == 0) {
      try_incumbent(completion(nd.fixes, s.x));
      if (has_inc && nb >= cutoff()) continue;
    }

    int q = select_branch(s.x, opt.int_tol);
    if (q < 0) {
      // Integral within tolerance: take the exact-fix value for this pattern.
      auto [ok, pobj] = try_incumbent(completion(nd.fixes, s.x));
      if (ok && pobj <= nb + 1e-7 * std::max(1.0, std::fabs(nb))) continue;
      // Exact fixing moved the value; split on sub-tolerance fractions.
      q = select_branch(s.x, 0.0);
      if (q < 0) {
        if (ok) continue;  // nothing left to split; polished value stands
        status = MilpStatus::Numerical;
        final_bound = std::min(open_bound(), has_inc ? inc : kInf);
        break;
      }
    }

    signed char pref = (s.x[q] >= 0.5) ? 1 : 0;
    Node other{id_counter++, nb, nd.fixes};
    other.fixes.emplace_back(q, static_cast<signed char>(1 - pref));
    Node prefn{id_counter++, nb, std::move(nd.fixes)};
    prefn.fixes.emplace_back(q, pref);
    heap.push(std::move(other));
    next_node = std::move(prefn);
    have_next = true;

    if (opt.log && nodes % 100 == 0) {
      char buf[192];
      std::snprintf(buf, sizeof(buf),
                    "nodes=%ld open=%zu inc=%.9g bound=%.9g gap=%.3g", nodes,
                    heap.size() + (have_next ? 1 : 0),
                    has_inc ? inc : kInf, b_open, g);
      opt.log(buf);
    }
  }

  MilpSolution out;
  out.status = status;
  out.nodes = nodes;
  out.lp_iterations = lp_iters;
  out.has_incumbent = has_inc;
  if (has_inc) {
    out.objective = inc;
    out.x = inc_x;
    out.bound = std::min(std::isfinite(final_bound) ? final_bound : inc, inc);
    out.gap = rel_gap(out.bound);
  } else {
    out.bound = std::isfinite(final_bound) ? final_bound : 0.0;
    out.gap = (status == MilpStatus::Infeasible) ? 0.0 : kInf;
  }
  return out;
}

MilpSolution brute_force_enumerate(const MilpInstance& inst,
                                   const LpEngine::Options& lpopt) {
  if (!inst.finalized())
    throw std::logic_error("brute_force_enumerate requires a finalized instance");
  const int n = inst.n_cols();
  std::vector<int> bins;
  for (int j = 0; j < n; ++j)
    if (inst.col(j).binary && inst.col(j).lb < inst.col(j).ub) bins.push_back(j);
  if (bins.size() > 20)
    throw std::invalid_argument(
        "brute_force_enumerate supports at most 20 free binaries");

  LpEngine engine(inst, lpopt);
  MilpSolution out;
  out.status = MilpStatus::Infeasible;
  const long total = 1L << bins.size();
  double best = kInf;
  for (long mask = 0; mask < total; ++mask) {
    std::vector<BoundFix> bf;
    bf.reserve(bins.size());
    for (size_t i = 0; i < bins.size(); ++i) {
      double v = static_cast<double>((mask >> i) & 1L);
      bf.push_back({bins[i], v, v});
    }
    const std::vector<signed char>* warm =
        engine.last_basis().empty() ? nullptr : &engine.last_basis();
    LpSolution s = engine.solve(bf, warm);
    if (s.status == LpStatus::Numerical || s.status == LpStatus::IterLimit) {
      out.lp_iterations += s.iterations;
      s = engine.solve(bf, nullptr);
    }
    out.lp_iterations += s.iterations;
    ++out.nodes;
    if (s.status == LpStatus::Optimal &&
        (!out.has_incumbent ||
         s.objective < best - 1e-12 * std::max(1.0, std::fabs(best)))) {
      best = s.objective;
      out.x = s.x;
      out.has_incumbent = true;
    }
  }
  if (out.has_incumbent) {
    out.status = MilpStatus::Optimal;
    out.objective = best;
    out.bound = best;
    out.gap = 0.0;
  }
  return out;
}

}  // namespace h2plan
