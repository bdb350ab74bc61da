#include "h2plan/plan_eval.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "h2plan/pipe_physics.hpp"

namespace h2plan {

namespace {

bool solved(MilpStatus s) {
  return s == MilpStatus::Optimal || s == MilpStatus::GapLimit;
}

// Run `task(0..n-1)`, across threads when asked for. The single-thread path
// is a plain loop so the deterministic reference behavior has no runtime
// dependencies.
void run_tasks(int n, int threads, const std::function<void(int)>& task) {
#ifdef _OPENMP
  if (threads > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int k = 0; k < n; ++k) task(k);
    return;
  }
#else
  (void)threads;
#endif
  for (int k = 0; k < n; ++k) task(k);
}

}  // namespace

KpiRow compute_kpis(const MilpInstance& inst, const NetworkTopology& net,
                    const Scenario& sc, const std::vector<double>& x) {
  KpiRow k;
  const double wfac = sc.annualization_weight() * sc.step;

  for (const auto& site : net.electrolyzers) {
    double u = x.at(inst.require_column(tags::units(site.id)));
    k.electrolyzer_invest += site.invest_cost * u;
    const auto& price = sc.electricity_cost.at(site.electricity_cost_series);
    for (int t = 0; t < sc.horizon; ++t)
      k.operating_cost += wfac * price[t] / site.efficiency *
                          x.at(inst.require_column(tags::prod(site.id, t)));
  }

  for (const auto& p : net.pipelines) {
    int ncat = static_cast<int>(p.catalog.size());
    for (int d = 0; d < ncat; ++d)
      if (x.at(inst.require_column(tags::build(p.id, d))) > 0.5)
        k.pipeline_invest += p.catalog[d].invest_cost;
  }

  for (const auto& nd : net.nodes)
    for (int t = 0; t < sc.horizon; ++t) {
      int c = inst.column_index(tags::nonsup(nd.id, t));
      if (c < 0) continue;
      double v = x.at(c);
      k.non_supplied += wfac * v;
      k.penalty_cost += wfac * sc.ns_penalty * v;
    }

  // Stored-mass swing: the storage state directly for the linepack model,
  // boundary pressures divided by the pipe's mass coefficient for the
  // dynamic one. Pressure and storage columns carry scaled units.
  for (const auto& p : net.pipelines) {
    double swing = 0.0;
    if (inst.model == FlowModelChoice::TransportLinepack) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (int t = 0; t < sc.horizon; ++t) {
        double m = x.at(inst.require_column(tags::pack(p.id, t))) *
                   kLinepackScale;
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
      swing = hi - lo;
    } else if (inst.model == FlowModelChoice::Dynamic) {
      int pick = -1;
      int ncat = static_cast<int>(p.catalog.size());
      for (int d = 0; d < ncat; ++d)
        if (x.at(inst.require_column(tags::build(p.id, d))) > 0.5) pick = d;
      if (pick >= 0) {
        auto [plo, phi] = pipeline_pressure_bounds(net, p);
        auto co = physics::compute_coefficients(p, p.catalog[pick], plo, phi,
                                                net.sound_speed);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int t = 0; t < sc.horizon; ++t) {
          double psum = x.at(inst.require_column(tags::press(p.from, t))) +
                        x.at(inst.require_column(tags::press(p.to, t)));
          double m = psum * kPressureScale / co.linepack_coeff;
          lo = std::min(lo, m);
          hi = std::max(hi, m);
        }
        swing = hi - lo;
      }
    }
    k.linepack_swing[p.id] = swing;
  }
  return k;
}

ConservationCheck check_conservation(const MilpInstance& inst,
                                     const NetworkTopology& net,
                                     const Scenario& sc,
                                     const std::vector<double>& x) {
  ConservationCheck c;
  for (int i = 0; i < inst.n_rows(); ++i) {
    const Row& r = inst.row(i);
    if (r.tag.rfind("balance[", 0) != 0) continue;
    double v = -r.rhs;
    for (const auto& e : r.entries) v += e.coef * x.at(e.col);
    c.balance_residual = std::max(c.balance_residual, std::fabs(v));
  }
  for (const auto& p : net.pipelines) {
    double net_in = 0.0;
    for (int t = 0; t < sc.horizon; ++t)
      net_in += sc.step * (x.at(inst.require_column(tags::flow_in(p.id, t))) -
                           x.at(inst.require_column(tags::flow_out(p.id, t))));
    c.cycle_residual = std::max(c.cycle_residual, std::fabs(net_in));
  }
  return c;
}

namespace {

PlanSolution finish_solution(const MilpInstance& inst,
                             const NetworkTopology& net, const Scenario& sc,
                             FlowModelChoice model, int segments,
                             const MilpSolution& ms) {
  PlanSolution out;
  out.model = model;
  out.segments = segments;
  out.status = ms.status;
  out.objective = ms.objective;
  out.bound = ms.bound;
  out.gap = ms.gap;
  out.nodes = ms.nodes;
  out.lp_iterations = ms.lp_iterations;
  if (ms.has_incumbent) {
    out.plan = extract_investments(inst, net, ms.x);
    out.has_plan = true;
    out.kpi = compute_kpis(inst, net, sc, ms.x);
    out.conservation = check_conservation(inst, net, sc, ms.x);
  }
  return out;
}

}  // namespace

PlanSolution plan(const NetworkTopology& net, const Scenario& sc,
                  const PlanConfig& cfg) {
  BuildConfig bc;
  bc.model = cfg.model;
  bc.pwl_segments = cfg.pwl_segments;
  bc.allow_no_build = cfg.allow_no_build;
  MilpInstance inst = build_hep(net, sc, bc);
  MilpOptions mo;
  mo.gap = cfg.gap;
  mo.node_limit = cfg.node_limit;
  mo.time_limit = cfg.time_limit;
  mo.log = cfg.log;
  MilpSolution ms = solve_milp(inst, mo);
  return finish_solution(inst, net, sc, cfg.model, cfg.pwl_segments, ms);
}

PlanSolution validate_under_dynamic(const InvestmentPlan& inv,
                                    const NetworkTopology& net,
                                    const Scenario& sc, const TruthConfig& tc) {
  BuildConfig bc;
  bc.model = FlowModelChoice::Dynamic;
  bc.pwl_segments = tc.pwl_segments;
  bc.allow_no_build = tc.allow_no_build;
  MilpInstance inst = build_hep(net, sc, bc);
  fix_investments(inst, net, inv);
  MilpOptions mo;
  mo.gap = tc.gap;
  mo.node_limit = tc.node_limit;
  mo.time_limit = tc.time_limit;
  MilpSolution ms = solve_milp(inst, mo);
  PlanSolution out = finish_solution(inst, net, sc, FlowModelChoice::Dynamic,
                                     tc.pwl_segments, ms);
  if (!out.has_plan) out.plan = inv;  // echo the request even on failure
  return out;
}

double regret(double cost_of_plan, double dynamic_optimum) {
  if (!(dynamic_optimum > 0.0))
    throw std::invalid_argument("regret: dynamic optimum must be positive");
  return (cost_of_plan - dynamic_optimum) / dynamic_optimum;
}

const SweepCell* SweepReport::cell(double level, FlowModelChoice model) const {
  for (const auto& c : cells)
    if (c.demand_level == level && c.model == model) return &c;
  return nullptr;
}

SweepReport demand_sweep(const NetworkTopology& net, const Scenario& base,
                         const std::vector<double>& levels,
                         const std::vector<FlowModelChoice>& models,
                         const SweepConfig& cfg) {
  if (levels.empty()) throw std::invalid_argument("demand_sweep: no levels");
  if (models.empty()) throw std::invalid_argument("demand_sweep: no models");
  for (double level : levels)
    if (!(level > 0.0))
      throw std::invalid_argument("demand_sweep: levels must be positive");
  double base_annual = base.annual_demand();
  if (!(base_annual > 0.0))
    throw std::invalid_argument("demand_sweep: base scenario has no demand");

  const int L = static_cast<int>(levels.size());
  const int M = static_cast<int>(models.size());
  SweepReport rep;
  rep.levels = levels;
  rep.models = models;
  rep.cells.resize(static_cast<size_t>(L) * M);

  std::vector<Scenario> scaled;
  scaled.reserve(L);
  for (double level : levels)
    scaled.push_back(scale_demand(base, level / base_annual));

  bool dynamic_in_models =
      std::find(models.begin(), models.end(), FlowModelChoice::Dynamic) !=
      models.end();
  std::vector<PlanSolution> hidden_truth(dynamic_in_models ? 0 : L);

  std::mutex log_mutex;
  auto note = [&](const std::string& line) {
    if (!cfg.log) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    cfg.log(line);
  };
  auto cell_name = [&](const SweepCell& c) {
    std::ostringstream os;
    os << to_string(c.model) << " @ " << c.demand_level / 1e9 << " Mt";
    return os.str();
  };

  // Planning pass. A hidden dynamic solve per level rides along when the
  // model list omits the regret denominator.
  int extra = dynamic_in_models ? 0 : L;
  run_tasks(L * M + extra, cfg.threads, [&](int k) {
    if (k >= L * M) {
      int li = k - L * M;
      PlanConfig pc;
      pc.model = FlowModelChoice::Dynamic;
      pc.pwl_segments = cfg.truth_segments;
      pc.gap = cfg.gap;
      pc.time_limit = cfg.time_limit;
      try {
        hidden_truth[li] = plan(net, scaled[li], pc);
      } catch (const std::exception&) {
      }
      return;
    }
    int li = k / M, mi = k % M;
    SweepCell& cell = rep.cells[k];
    cell.demand_level = levels[li];
    cell.model = models[mi];
    PlanConfig pc;
    pc.model = models[mi];
    pc.pwl_segments = models[mi] == FlowModelChoice::Dynamic
                          ? cfg.truth_segments
                          : cfg.planning_segments;
    pc.gap = cfg.gap;
    pc.time_limit = cfg.time_limit;
    try {
      cell.planning = plan(net, scaled[li], pc);
      if (!solved(cell.planning.status) || !cell.planning.has_plan)
        cell.error =
            std::string("planning: ") + to_string(cell.planning.status);
    } catch (const std::exception& e) {
      cell.error = std::string("planning: ") + e.what();
    }
    note("planned " + cell_name(cell));
  });

  // Validation pass: operate each surviving plan under the dynamic standard.
  run_tasks(L * M, cfg.threads, [&](int k) {
    SweepCell& cell = rep.cells[k];
    if (!cell.error.empty() || !cell.planning.has_plan) return;
    int li = k / M;
    TruthConfig tc;
    tc.pwl_segments = cfg.truth_segments;
    tc.gap = cfg.gap;
    tc.time_limit = cfg.time_limit;
    try {
      cell.validation =
          validate_under_dynamic(cell.planning.plan, net, scaled[li], tc);
      if (!solved(cell.validation.status) || !cell.validation.has_plan)
        cell.error =
            std::string("validation: ") + to_string(cell.validation.status);
    } catch (const std::exception& e) {
      cell.error = std::string("validation: ") + e.what();
    }
    note("validated " + cell_name(cell));
  });

  // Regret assembly, serial: one denominator per level.
  for (int li = 0; li < L; ++li) {
    const PlanSolution* truth = nullptr;
    if (dynamic_in_models) {
      for (int mi = 0; mi < M; ++mi) {
        const SweepCell& c = rep.cells[li * M + mi];
        if (c.model == FlowModelChoice::Dynamic && c.error.empty())
          truth = &c.planning;
      }
    } else if (solved(hidden_truth[li].status)) {
      truth = &hidden_truth[li];
    }
    for (int mi = 0; mi < M; ++mi) {
      SweepCell& cell = rep.cells[li * M + mi];
      cell.ok = cell.error.empty() && cell.planning.has_plan &&
                cell.validation.has_plan;
      if (cell.ok && truth && truth->objective > 0.0)
        cell.regret = regret(cell.validation.objective, truth->objective);
    }
  }
  return rep;
}

}  // namespace h2plan
