#include "h2plan/hep_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "h2plan/pipe_physics.hpp"
#include "h2plan/pwl.hpp"
#include "h2plan/validation.hpp"

namespace h2plan {

namespace {

std::string two(int v) {
  char b[16];
  std::snprintf(b, sizeof(b), "%02d", v);
  return b;
}

std::string three(int v) {
  char b[16];
  std::snprintf(b, sizeof(b), "%03d", v);
  return b;
}

}  // namespace

namespace tags {

std::string build(const std::string& p, int d) { return "build[a=" + p + ",d=" + two(d) + "]"; }
std::string choose(const std::string& p) { return "choose[a=" + p + "]"; }
std::string units(const std::string& e) { return "units[e=" + e + "]"; }
std::string prod(const std::string& e, int t) { return "prod[e=" + e + ",t=" + three(t) + "]"; }
std::string prod_cap(const std::string& e, int t) { return "prod_cap[e=" + e + ",t=" + three(t) + "]"; }
std::string nonsup(const std::string& n, int t) { return "nonsup[i=" + n + ",t=" + three(t) + "]"; }
std::string balance(const std::string& n, int t) { return "balance[i=" + n + ",t=" + three(t) + "]"; }
std::string flow_in(const std::string& p, int t) { return "flow_in[a=" + p + ",t=" + three(t) + "]"; }
std::string flow_out(const std::string& p, int t) { return "flow_out[a=" + p + ",t=" + three(t) + "]"; }
std::string flow_avg(const std::string& p, int t) { return "flow_avg[a=" + p + ",t=" + three(t) + "]"; }
std::string flow(const std::string& p, int t) { return "flow[a=" + p + ",t=" + three(t) + "]"; }
std::string press(const std::string& n, int t) { return "press[i=" + n + ",t=" + three(t) + "]"; }
std::string press_sqr(const std::string& n, int t) { return "press_sqr[i=" + n + ",t=" + three(t) + "]"; }
std::string fric(const std::string& p, int t) { return "fric[a=" + p + ",t=" + three(t) + "]"; }
std::string pack(const std::string& p, int t) { return "pack[a=" + p + ",t=" + three(t) + "]"; }
std::string cflow_in(const std::string& c, int t) { return "cflow_in[c=" + c + ",t=" + three(t) + "]"; }
std::string cflow_out(const std::string& c, int t) { return "cflow_out[c=" + c + ",t=" + three(t) + "]"; }

}  // namespace tags

namespace {

struct PipeData {
  const CandidatePipeline* pipe = nullptr;
  double pmin = 0.0, pmax = 0.0;  // pressure envelope
  std::vector<physics::PipeCoefficients> coef;
  double fmax = 0.0;     // largest catalog flow bound
  double hmin = 0.0;     // smallest linepack coefficient
  double packmax = 0.0;  // largest linepack upper bound
  double fio = 0.0;      // static bound on boundary flows (dynamic model)
};

PipeData make_pipe_data(const NetworkTopology& net, const CandidatePipeline& p,
                        double step) {
  PipeData d;
  d.pipe = &p;
  auto [lo, hi] = pipeline_pressure_bounds(net, p);
  d.pmin = lo;
  d.pmax = hi;
  d.hmin = std::numeric_limits<double>::infinity();
  for (const auto& opt : p.catalog) {
    auto c = physics::compute_coefficients(p, opt, lo, hi, net.sound_speed);
    d.fmax = std::max(d.fmax, c.max_flow);
    d.hmin = std::min(d.hmin, c.linepack_coeff);
    d.packmax = std::max(d.packmax, c.linepack_max);
    d.coef.push_back(c);
  }
  // Boundary flows of a built pipe obey |f_in|, |f_out| <= Fbar + swing/(dt H):
  // the average is momentum-limited and the in/out split is mass-limited.
  d.fio = d.fmax + (hi - lo) / (step * d.hmin);
  return d;
}

// Emit one interpolated term y ~ g(x): delta columns, ordering binaries, the
// coupling rows, and the term registration. A zero-width domain collapses to
// constant rows so the audit still sees the term.
void emit_pwl(MilpInstance& inst, const std::string& base, int x_col, int y_col,
              PwlShape shape, double lo, double hi, int segments) {
  PwlApprox ap = PwlApprox::build(shape, lo, hi, segments);
  PwlTermInfo info;
  info.tag = base;
  info.x_col = x_col;
  info.y_col = y_col;
  info.breaks = ap.breaks;
  info.values = ap.values;
  info.max_error = ap.max_error;

  if (ap.breaks.size() < 2) {
    inst.add_row("pwl_x::" + base, RowSense::EQ, lo, {{x_col, 1.0}});
    inst.add_row("pwl_y::" + base, RowSense::EQ, ap.values.front(),
                 {{y_col, 1.0}});
    inst.register_pwl_term(std::move(info));
    return;
  }

  const int nseg = static_cast<int>(ap.breaks.size()) - 1;
  std::vector<RowEntry> xrow{{x_col, 1.0}};
  std::vector<RowEntry> yrow{{y_col, 1.0}};
  for (int k = 0; k < nseg; ++k) {
    double w = ap.breaks[k + 1] - ap.breaks[k];
    double slope = (ap.values[k + 1] - ap.values[k]) / w;
    int dc = inst.add_column("pwl_d::" + base + "[k=" + two(k) + "]", 0.0, w,
                             0.0, false);
    info.delta_cols.push_back(dc);
    xrow.push_back({dc, -1.0});
    yrow.push_back({dc, -slope});
  }
  inst.add_row("pwl_x::" + base, RowSense::EQ, ap.breaks.front(),
               std::move(xrow));
  inst.add_row("pwl_y::" + base, RowSense::EQ, ap.values.front(),
               std::move(yrow));
  for (int k = 0; k + 1 < nseg; ++k) {
    int zc = inst.add_column("pwl_z::" + base + "[k=" + two(k) + "]", 0.0, 1.0,
                             0.0, true);
    info.fill_cols.push_back(zc);
    double wk = ap.breaks[k + 1] - ap.breaks[k];
    double wn = ap.breaks[k + 2] - ap.breaks[k + 1];
    inst.add_row("pwl_fill::" + base + "[k=" + two(k) + "]", RowSense::GE, 0.0,
                 {{info.delta_cols[k], 1.0}, {zc, -wk}});
    inst.add_row("pwl_next::" + base + "[k=" + two(k) + "]", RowSense::LE, 0.0,
                 {{info.delta_cols[k + 1], 1.0}, {zc, -wn}});
  }
  inst.register_pwl_term(std::move(info));
}

}  // namespace

MilpInstance build_hep(const NetworkTopology& net, const Scenario& sc,
                       const BuildConfig& cfg) {
  ValidationReport report = validate(net, sc);
  if (!report.ok())
    throw std::invalid_argument("build_hep: " + report.summary());
  if (cfg.pwl_segments < 2)
    throw std::invalid_argument("build_hep: pwl_segments must be >= 2");

  const int T = sc.horizon;
  const int NN = static_cast<int>(net.nodes.size());
  const int NP = static_cast<int>(net.pipelines.size());
  const int NC = static_cast<int>(net.compressors.size());
  const int NE = static_cast<int>(net.electrolyzers.size());
  const double dt = sc.step;
  const double wfac = sc.annualization_weight() * dt;  // s-to-year objective
  const double kP = kPressureScale;       // pressure columns in these units
  const double kP2 = kP * kP;             // squared-pressure columns likewise

  const bool dynamic = cfg.model == FlowModelChoice::Dynamic;
  const bool steady = cfg.model == FlowModelChoice::SteadyState;
  const bool linepack = cfg.model == FlowModelChoice::TransportLinepack;
  const bool transportish = !dynamic && !steady;  // transport or linepack

  MilpInstance inst;
  inst.model = cfg.model;
  inst.pwl_segments = cfg.pwl_segments;
  inst.name = net.name;

  std::vector<PipeData> pd;
  pd.reserve(NP);
  for (const auto& p : net.pipelines) pd.push_back(make_pipe_data(net, p, dt));

  // ---- columns ------------------------------------------------------------

  std::vector<std::vector<int>> build_col(NP);
  for (int a = 0; a < NP; ++a) {
    const auto& p = net.pipelines[a];
    int ncat = static_cast<int>(p.catalog.size());
    for (int d = 0; d < ncat; ++d)
      build_col[a].push_back(inst.add_column(tags::build(p.id, d), 0.0, 1.0,
                                             p.catalog[d].invest_cost, true));
    if (cfg.allow_no_build)
      build_col[a].push_back(
          inst.add_column(tags::build(p.id, ncat), 0.0, 1.0, 0.0, true));
    inst.register_choice_group(build_col[a]);
  }

  std::vector<int> units_col(NE);
  std::vector<std::vector<int>> prod_col(NE, std::vector<int>(T));
  double total_prod_cap = 0.0;
  for (int e = 0; e < NE; ++e) {
    const auto& site = net.electrolyzers[e];
    units_col[e] = inst.add_column(tags::units(site.id), 0.0, site.max_units,
                                   site.invest_cost, false);
    const auto& price = sc.electricity_cost.at(site.electricity_cost_series);
    double cap = site.efficiency * site.unit_capacity * site.max_units;
    total_prod_cap += cap;
    for (int t = 0; t < T; ++t)
      prod_col[e][t] =
          inst.add_column(tags::prod(site.id, t), 0.0, cap,
                          wfac * price[t] / site.efficiency, false);
  }

  std::vector<char> node_has_demand(NN, 0);
  double peak_demand = 0.0;
  for (int t = 0; t < T; ++t) {
    double tot = 0.0;
    for (int i = 0; i < NN; ++i) {
      double d = sc.demand_at(net.nodes[i].id, t);
      tot += d;
      if (d > 0.0) node_has_demand[i] = 1;
    }
    peak_demand = std::max(peak_demand, tot);
  }
  std::vector<std::vector<int>> ns_col(NN, std::vector<int>(T, -1));
  for (int i = 0; i < NN; ++i) {
    if (!node_has_demand[i]) continue;
    for (int t = 0; t < T; ++t)
      ns_col[i][t] = inst.add_column(tags::nonsup(net.nodes[i].id, t), 0.0,
                                     sc.demand_at(net.nodes[i].id, t),
                                     wfac * sc.ns_penalty, false);
  }

  std::vector<std::vector<int>> fin(NP, std::vector<int>(T));
  std::vector<std::vector<int>> fout(NP, std::vector<int>(T));
  std::vector<std::vector<int>> favg, fcol, fricc, packc;
  if (dynamic) favg.assign(NP, std::vector<int>(T));
  if (steady) fcol.assign(NP, std::vector<int>(T));
  if (dynamic || steady) fricc.assign(NP, std::vector<int>(T));
  if (linepack) packc.assign(NP, std::vector<int>(T));
  for (int a = 0; a < NP; ++a) {
    const auto& p = net.pipelines[a];
    double fb = dynamic ? pd[a].fio : pd[a].fmax;
    for (int t = 0; t < T; ++t) {
      fin[a][t] = inst.add_column(tags::flow_in(p.id, t), -fb, fb, 0.0, false);
      fout[a][t] = inst.add_column(tags::flow_out(p.id, t), -fb, fb, 0.0, false);
      if (dynamic)
        favg[a][t] = inst.add_column(tags::flow_avg(p.id, t), -pd[a].fmax,
                                     pd[a].fmax, 0.0, false);
      if (steady)
        fcol[a][t] = inst.add_column(tags::flow(p.id, t), -pd[a].fmax,
                                     pd[a].fmax, 0.0, false);
      if (dynamic || steady) {
        double ymax = pd[a].fmax * pd[a].fmax;
        fricc[a][t] =
            inst.add_column(tags::fric(p.id, t), -ymax, ymax, 0.0, false);
      }
      if (linepack)
        packc[a][t] = inst.add_column(tags::pack(p.id, t), 0.0,
                                      pd[a].packmax / kLinepackScale, 0.0,
                                      false);
    }
  }

  std::vector<std::vector<int>> pressc, psqr;
  if (dynamic) {
    pressc.assign(NN, std::vector<int>(T));
    psqr.assign(NN, std::vector<int>(T));
    for (int i = 0; i < NN; ++i) {
      const auto& nd = net.nodes[i];
      double plo = nd.pressure_min / kP, phi = nd.pressure_max / kP;
      for (int t = 0; t < T; ++t) {
        pressc[i][t] =
            inst.add_column(tags::press(nd.id, t), plo, phi, 0.0, false);
        psqr[i][t] = inst.add_column(tags::press_sqr(nd.id, t), plo * plo,
                                     phi * phi, 0.0, false);
      }
    }
  } else if (steady) {
    psqr.assign(NN, std::vector<int>(T));
    for (int i = 0; i < NN; ++i) {
      const auto& nd = net.nodes[i];
      double plo = nd.pressure_min / kP, phi = nd.pressure_max / kP;
      for (int t = 0; t < T; ++t)
        psqr[i][t] = inst.add_column(tags::press_sqr(nd.id, t), plo * plo,
                                     phi * phi, 0.0, false);
    }
  }

  double comp_bound = cfg.compressor_flow_bound;
  if (comp_bound <= 0.0) {
    comp_bound = total_prod_cap + peak_demand;
    for (const auto& d : pd) comp_bound += d.fio;
    comp_bound = std::max(comp_bound, 1.0);
  }
  std::vector<std::vector<int>> cin(NC, std::vector<int>(T));
  std::vector<std::vector<int>> cout(NC, std::vector<int>(T));
  for (int c = 0; c < NC; ++c) {
    const auto& comp = net.compressors[c];
    for (int t = 0; t < T; ++t) {
      cin[c][t] = inst.add_column(tags::cflow_in(comp.id, t), -comp_bound,
                                  comp_bound, 0.0, false);
      cout[c][t] = inst.add_column(tags::cflow_out(comp.id, t), -comp_bound,
                                   comp_bound, 0.0, false);
    }
  }

  // ---- shared rows --------------------------------------------------------

  for (int a = 0; a < NP; ++a) {
    std::vector<RowEntry> entries;
    for (int c : build_col[a]) entries.push_back({c, 1.0});
    inst.add_row(tags::choose(net.pipelines[a].id), RowSense::EQ, 1.0,
                 std::move(entries));
  }

  for (int e = 0; e < NE; ++e) {
    const auto& site = net.electrolyzers[e];
    const auto& avail = sc.availability.at(site.availability_series);
    for (int t = 0; t < T; ++t)
      inst.add_row(tags::prod_cap(site.id, t), RowSense::LE, 0.0,
                   {{prod_col[e][t], 1.0},
                    {units_col[e], -site.efficiency * avail[t]}});
  }

  {
    // Balance at (i, t): production + pipe deliveries + compressor deliveries
    // + unserved demand = demand. A pipe takes flow_in from its tail node and
    // yields flow_out at its head; compressors likewise.
    std::vector<std::vector<std::vector<RowEntry>>> bal(
        NN, std::vector<std::vector<RowEntry>>(T));
    for (int e = 0; e < NE; ++e) {
      int i = net.node_index(net.electrolyzers[e].node);
      for (int t = 0; t < T; ++t) bal[i][t].push_back({prod_col[e][t], 1.0});
    }
    for (int a = 0; a < NP; ++a) {
      int i = net.node_index(net.pipelines[a].from);
      int j = net.node_index(net.pipelines[a].to);
      for (int t = 0; t < T; ++t) {
        bal[i][t].push_back({fin[a][t], -1.0});
        bal[j][t].push_back({fout[a][t], 1.0});
      }
    }
    for (int c = 0; c < NC; ++c) {
      int i = net.node_index(net.compressors[c].from);
      int j = net.node_index(net.compressors[c].to);
      for (int t = 0; t < T; ++t) {
        bal[i][t].push_back({cin[c][t], -1.0});
        bal[j][t].push_back({cout[c][t], 1.0});
      }
    }
    for (int i = 0; i < NN; ++i)
      for (int t = 0; t < T; ++t) {
        if (ns_col[i][t] >= 0) bal[i][t].push_back({ns_col[i][t], 1.0});
        if (bal[i][t].empty()) continue;  // isolated node without demand
        inst.add_row(tags::balance(net.nodes[i].id, t), RowSense::EQ,
                     sc.demand_at(net.nodes[i].id, t), std::move(bal[i][t]));
      }
  }

  for (int c = 0; c < NC; ++c) {
    const auto& comp = net.compressors[c];
    for (int t = 0; t < T; ++t)
      inst.add_row("comp_bal[c=" + comp.id + ",t=" + three(t) + "]",
                   RowSense::EQ, 0.0,
                   {{cin[c][t], 1.0}, {cout[c][t], -1.0}});
  }

  // ---- model blocks -------------------------------------------------------

  if (dynamic) {
    for (int i = 0; i < NN; ++i) {
      const auto& nd = net.nodes[i];
      for (int t = 0; t < T; ++t)
        emit_pwl(inst, tags::press(nd.id, t), pressc[i][t], psqr[i][t],
                 PwlShape::Square, nd.pressure_min / kP, nd.pressure_max / kP,
                 cfg.pwl_segments);
    }
    for (int a = 0; a < NP; ++a) {
      const auto& p = net.pipelines[a];
      int i = net.node_index(p.from);
      int j = net.node_index(p.to);
      double mom_big = pd[a].pmax * pd[a].pmax / kP2;
      {
        double worst = 0.0;
        for (const auto& c : pd[a].coef)
          worst = std::max(worst, c.resistance);
        mom_big += worst / kP2 * pd[a].fmax * pd[a].fmax;
      }
      for (int t = 0; t < T; ++t) {
        emit_pwl(inst, tags::flow_avg(p.id, t), favg[a][t], fricc[a][t],
                 PwlShape::SignedSquare, -pd[a].fmax, pd[a].fmax,
                 cfg.pwl_segments);
        inst.add_row("def_avg[a=" + p.id + ",t=" + three(t) + "]", RowSense::EQ,
                     0.0,
                     {{favg[a][t], 1.0}, {fin[a][t], -0.5}, {fout[a][t], -0.5}});
        int prev = (t + T - 1) % T;
        int ncat = static_cast<int>(p.catalog.size());
        for (int d = 0; d < ncat; ++d) {
          const auto& co = pd[a].coef[d];
          std::string suffix = "[a=" + p.id + ",d=" + two(d) + ",t=" + three(t) + "]";
          inst.add_row("mom_up" + suffix, RowSense::LE, mom_big,
                       {{psqr[i][t], 1.0},
                        {psqr[j][t], -1.0},
                        {fricc[a][t], -co.resistance / kP2},
                        {build_col[a][d], mom_big}});
          inst.add_row("mom_lo" + suffix, RowSense::GE, -mom_big,
                       {{psqr[i][t], 1.0},
                        {psqr[j][t], -1.0},
                        {fricc[a][t], -co.resistance / kP2},
                        {build_col[a][d], -mom_big}});
          double mass_big = 2.0 * (pd[a].pmax - pd[a].pmin) / kP +
                            2.0 * dt * co.linepack_coeff / kP * pd[a].fio;
          std::vector<RowEntry> base;
          if (prev != t) {
            base = {{pressc[i][t], 1.0},
                    {pressc[j][t], 1.0},
                    {pressc[i][prev], -1.0},
                    {pressc[j][prev], -1.0}};
          }
          base.push_back({fin[a][t], -dt * co.linepack_coeff / kP});
          base.push_back({fout[a][t], dt * co.linepack_coeff / kP});
          std::vector<RowEntry> up = base;
          up.push_back({build_col[a][d], mass_big});
          inst.add_row("mass_up" + suffix, RowSense::LE, mass_big,
                       std::move(up));
          base.push_back({build_col[a][d], -mass_big});
          inst.add_row("mass_lo" + suffix, RowSense::GE, -mass_big,
                       std::move(base));
        }
        if (cfg.allow_no_build) {
          int bp = build_col[a].back();
          double fb = pd[a].fio;
          std::string sfx = "[a=" + p.id + ",t=" + three(t) + "]";
          inst.add_row("absent_in_up" + sfx, RowSense::LE, fb,
                       {{fin[a][t], 1.0}, {bp, fb}});
          inst.add_row("absent_in_lo" + sfx, RowSense::GE, -fb,
                       {{fin[a][t], 1.0}, {bp, -fb}});
          inst.add_row("absent_out_up" + sfx, RowSense::LE, fb,
                       {{fout[a][t], 1.0}, {bp, fb}});
          inst.add_row("absent_out_lo" + sfx, RowSense::GE, -fb,
                       {{fout[a][t], 1.0}, {bp, -fb}});
        }
      }
      // Cyclic closure: over one period a pipe stores no net gas. The mass
      // rows already imply this for whichever diameter is selected (their
      // pressure terms telescope to zero around the cycle), but they carry
      // activation constants, so a fractional diameter mix would otherwise
      // let a relaxed pipe conjure flow out of storage it never fills.
      {
        std::vector<RowEntry> cyc;
        cyc.reserve(2 * T);
        for (int t = 0; t < T; ++t) {
          cyc.push_back({fin[a][t], 1.0});
          cyc.push_back({fout[a][t], -1.0});
        }
        inst.add_row("cycle[a=" + p.id + "]", RowSense::EQ, 0.0,
                     std::move(cyc));
      }
    }
    for (int c = 0; c < NC; ++c) {
      const auto& comp = net.compressors[c];
      int i = net.node_index(comp.from);
      int j = net.node_index(comp.to);
      for (int t = 0; t < T; ++t) {
        std::string sfx = "[c=" + comp.id + ",t=" + three(t) + "]";
        if (comp.control == CompressorControl::FixedRatio) {
          inst.add_row("comp_fix" + sfx, RowSense::EQ, 0.0,
                       {{pressc[j][t], 1.0}, {pressc[i][t], -comp.ratio}});
        } else {
          inst.add_row("comp_lo" + sfx, RowSense::GE, 0.0,
                       {{pressc[j][t], 1.0}, {pressc[i][t], -1.0}});
          inst.add_row("comp_hi" + sfx, RowSense::LE, 0.0,
                       {{pressc[j][t], 1.0}, {pressc[i][t], -comp.ratio}});
        }
      }
    }
  } else if (steady) {
    for (int a = 0; a < NP; ++a) {
      const auto& p = net.pipelines[a];
      int i = net.node_index(p.from);
      int j = net.node_index(p.to);
      double mom_big = pd[a].pmax * pd[a].pmax / kP2;
      {
        double worst = 0.0;
        for (const auto& c : pd[a].coef)
          worst = std::max(worst, c.resistance);
        mom_big += worst / kP2 * pd[a].fmax * pd[a].fmax;
      }
      for (int t = 0; t < T; ++t) {
        emit_pwl(inst, tags::flow(p.id, t), fcol[a][t], fricc[a][t],
                 PwlShape::SignedSquare, -pd[a].fmax, pd[a].fmax,
                 cfg.pwl_segments);
        std::string sfx = "[a=" + p.id + ",t=" + three(t) + "]";
        inst.add_row("eq_in" + sfx, RowSense::EQ, 0.0,
                     {{fin[a][t], 1.0}, {fcol[a][t], -1.0}});
        inst.add_row("eq_out" + sfx, RowSense::EQ, 0.0,
                     {{fout[a][t], 1.0}, {fcol[a][t], -1.0}});
        int ncat = static_cast<int>(p.catalog.size());
        for (int d = 0; d < ncat; ++d) {
          const auto& co = pd[a].coef[d];
          std::string suffix = "[a=" + p.id + ",d=" + two(d) + ",t=" + three(t) + "]";
          inst.add_row("mom_up" + suffix, RowSense::LE, mom_big,
                       {{psqr[i][t], 1.0},
                        {psqr[j][t], -1.0},
                        {fricc[a][t], -co.resistance / kP2},
                        {build_col[a][d], mom_big}});
          inst.add_row("mom_lo" + suffix, RowSense::GE, -mom_big,
                       {{psqr[i][t], 1.0},
                        {psqr[j][t], -1.0},
                        {fricc[a][t], -co.resistance / kP2},
                        {build_col[a][d], -mom_big}});
        }
        if (cfg.allow_no_build) {
          int bp = build_col[a].back();
          double fb = pd[a].fmax;
          inst.add_row("absent_up" + sfx, RowSense::LE, fb,
                       {{fcol[a][t], 1.0}, {bp, fb}});
          inst.add_row("absent_lo" + sfx, RowSense::GE, -fb,
                       {{fcol[a][t], 1.0}, {bp, -fb}});
        }
      }
    }
    for (int c = 0; c < NC; ++c) {
      const auto& comp = net.compressors[c];
      int i = net.node_index(comp.from);
      int j = net.node_index(comp.to);
      double r2 = comp.ratio * comp.ratio;
      for (int t = 0; t < T; ++t) {
        std::string sfx = "[c=" + comp.id + ",t=" + three(t) + "]";
        if (comp.control == CompressorControl::FixedRatio) {
          inst.add_row("comp_fix" + sfx, RowSense::EQ, 0.0,
                       {{psqr[j][t], 1.0}, {psqr[i][t], -r2}});
        } else {
          inst.add_row("comp_lo" + sfx, RowSense::GE, 0.0,
                       {{psqr[j][t], 1.0}, {psqr[i][t], -1.0}});
          inst.add_row("comp_hi" + sfx, RowSense::LE, 0.0,
                       {{psqr[j][t], 1.0}, {psqr[i][t], -r2}});
        }
      }
    }
  }

  if (transportish) {
    for (int a = 0; a < NP; ++a) {
      const auto& p = net.pipelines[a];
      int ncat = static_cast<int>(p.catalog.size());
      for (int t = 0; t < T; ++t) {
        std::string sfx = "[a=" + p.id + ",t=" + three(t) + "]";
        auto cap_rows = [&](const char* up_tag, const char* lo_tag, int fc) {
          std::vector<RowEntry> up{{fc, 1.0}};
          std::vector<RowEntry> lo{{fc, 1.0}};
          for (int d = 0; d < ncat; ++d) {
            up.push_back({build_col[a][d], -pd[a].coef[d].max_flow});
            lo.push_back({build_col[a][d], pd[a].coef[d].max_flow});
          }
          inst.add_row(up_tag + sfx, RowSense::LE, 0.0, std::move(up));
          inst.add_row(lo_tag + sfx, RowSense::GE, 0.0, std::move(lo));
        };
        cap_rows("cap_in_up", "cap_in_lo", fin[a][t]);
        cap_rows("cap_out_up", "cap_out_lo", fout[a][t]);
        if (linepack) {
          const double kM = kLinepackScale;
          int prev = (t + T - 1) % T;
          std::vector<RowEntry> link;
          if (prev != t)
            link = {{packc[a][t], 1.0}, {packc[a][prev], -1.0}};
          link.push_back({fin[a][t], -dt / kM});
          link.push_back({fout[a][t], dt / kM});
          inst.add_row("pack_link" + sfx, RowSense::EQ, 0.0, std::move(link));
          std::vector<RowEntry> lo{{packc[a][t], 1.0}};
          std::vector<RowEntry> hi{{packc[a][t], 1.0}};
          for (int d = 0; d < ncat; ++d) {
            lo.push_back({build_col[a][d], -pd[a].coef[d].linepack_min / kM});
            hi.push_back({build_col[a][d], -pd[a].coef[d].linepack_max / kM});
          }
          inst.add_row("pack_lo" + sfx, RowSense::GE, 0.0, std::move(lo));
          inst.add_row("pack_hi" + sfx, RowSense::LE, 0.0, std::move(hi));
        } else {
          inst.add_row("eq_io" + sfx, RowSense::EQ, 0.0,
                       {{fin[a][t], 1.0}, {fout[a][t], -1.0}});
        }
      }
    }
  }

  inst.finalize();
  return inst;
}

void fix_investments(MilpInstance& inst, const NetworkTopology& net,
                     const InvestmentPlan& plan) {
  if (!inst.finalized())
    throw std::logic_error("fix_investments requires a finalized instance");
  for (const auto& p : net.pipelines) {
    auto it = plan.diameter_choice.find(p.id);
    if (it == plan.diameter_choice.end())
      throw std::invalid_argument("fix_investments: no diameter choice for pipeline " + p.id);
    int ncat = static_cast<int>(p.catalog.size());
    bool pseudo = inst.column_index(tags::build(p.id, ncat)) >= 0;
    int pick = it->second;
    if (pick < 0 && !(pick == -1 && pseudo))
      throw std::invalid_argument("fix_investments: pipeline " + p.id +
                                  " has no not-built option");
    if (pick >= ncat)
      throw std::invalid_argument("fix_investments: diameter index out of range for pipeline " + p.id);
    int pick_idx = pick < 0 ? ncat : pick;
    int avail = ncat + (pseudo ? 1 : 0);
    for (int d = 0; d < avail; ++d) {
      std::string tag = tags::build(p.id, d);
      int c = inst.require_column(tag);
      if (!inst.pinned_bounds.count(tag))
        inst.pinned_bounds[tag] = {inst.col(c).lb, inst.col(c).ub};
      double v = (d == pick_idx) ? 1.0 : 0.0;
      inst.set_bounds(c, v, v);
    }
  }
  for (const auto& site : net.electrolyzers) {
    auto it = plan.electrolyzer_units.find(site.id);
    if (it == plan.electrolyzer_units.end())
      throw std::invalid_argument("fix_investments: no unit count for site " + site.id);
    double u = it->second;
    if (u < -1e-9 || u > site.max_units + 1e-9)
      throw std::invalid_argument("fix_investments: unit count out of range for site " + site.id);
    u = std::clamp(u, 0.0, site.max_units);
    std::string tag = tags::units(site.id);
    int c = inst.require_column(tag);
    if (!inst.pinned_bounds.count(tag))
      inst.pinned_bounds[tag] = {inst.col(c).lb, inst.col(c).ub};
    inst.set_bounds(c, u, u);
  }
}

void unfix_investments(MilpInstance& inst) {
  for (const auto& [tag, b] : inst.pinned_bounds)
    inst.set_bounds(inst.require_column(tag), b.first, b.second);
  inst.pinned_bounds.clear();
}

InvestmentPlan extract_investments(const MilpInstance& inst,
                                   const NetworkTopology& net,
                                   const std::vector<double>& x) {
  InvestmentPlan plan;
  for (const auto& p : net.pipelines) {
    int ncat = static_cast<int>(p.catalog.size());
    int avail = ncat + (inst.column_index(tags::build(p.id, ncat)) >= 0 ? 1 : 0);
    int pick = -2;
    for (int d = 0; d < avail; ++d) {
      int c = inst.require_column(tags::build(p.id, d));
      if (x.at(c) > 0.5) {
        if (pick != -2)
          throw std::runtime_error("multiple diameters selected for pipeline " + p.id);
        pick = (d == ncat) ? -1 : d;
      }
    }
    if (pick == -2)
      throw std::runtime_error("no diameter selected for pipeline " + p.id);
    plan.diameter_choice[p.id] = pick;
  }
  for (const auto& site : net.electrolyzers) {
    double u = x.at(inst.require_column(tags::units(site.id)));
    plan.electrolyzer_units[site.id] = std::clamp(u, 0.0, site.max_units);
  }
  return plan;
}

}  // namespace h2plan
