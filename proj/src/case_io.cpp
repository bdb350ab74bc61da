#include "h2plan/case_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "h2plan/pipe_physics.hpp"
#include "h2plan/units.hpp"
#include "h2plan/validation.hpp"

namespace h2plan {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

// Round through 12 significant digits. Written files quantize every number
// this way so that a save/load cycle is a fixpoint of the file bytes.
double q12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string fmt12(double v) {
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(p.string() + ": cannot open for writing");
  out << body;
  if (!out) fail(p.string() + ": write failed");
}

json read_json_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(p.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(p.string() + ": " + e.what());
  }
}

const json& need(const json& o, const std::string& key, const std::string& ctx) {
  if (!o.is_object()) fail(ctx + ": expected an object");
  auto it = o.find(key);
  if (it == o.end()) fail(ctx + ": missing field '" + key + "'");
  return *it;
}

double need_num(const json& o, const std::string& key, const std::string& ctx) {
  const json& v = need(o, key, ctx);
  if (!v.is_number()) fail(ctx + ": field '" + key + "' must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) fail(ctx + ": field '" + key + "' is not finite");
  return d;
}

int need_int(const json& o, const std::string& key, const std::string& ctx) {
  const json& v = need(o, key, ctx);
  if (!v.is_number_integer())
    fail(ctx + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

std::string need_str(const json& o, const std::string& key,
                     const std::string& ctx) {
  const json& v = need(o, key, ctx);
  if (!v.is_string()) fail(ctx + ": field '" + key + "' must be a string");
  std::string s = v.get<std::string>();
  if (s.empty()) fail(ctx + ": field '" + key + "' is empty");
  return s;
}

const json& need_array(const json& o, const std::string& key,
                       const std::string& ctx) {
  const json& v = need(o, key, ctx);
  if (!v.is_array()) fail(ctx + ": field '" + key + "' must be an array");
  return v;
}

// --- CSV primitives -------------------------------------------------------

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(p.string() + ": cannot open");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

double parse_double(const std::string& s, const std::string& ctx) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c || *end != '\0')
    fail(ctx + ": '" + s + "' is not a number");
  return v;
}

long parse_long(const std::string& s, const std::string& ctx) {
  const char* c = s.c_str();
  char* end = nullptr;
  long v = std::strtol(c, &end, 10);
  if (end == c || *end != '\0')
    fail(ctx + ": '" + s + "' is not an integer");
  return v;
}

MilpStatus milp_status_from_string(const std::string& s,
                                   const std::string& ctx) {
  if (s == "optimal") return MilpStatus::Optimal;
  if (s == "gap-limit") return MilpStatus::GapLimit;
  if (s == "infeasible") return MilpStatus::Infeasible;
  if (s == "limit") return MilpStatus::Limit;
  if (s == "numerical-failure") return MilpStatus::Numerical;
  fail(ctx + ": unknown solver status '" + s + "'");
}

// --- topology.json --------------------------------------------------------

const char* kAvailPrefix = "availability_mw";
const char* kCostPrefix = "electricity_cost_eur_per_mwh";
const char* kDemandPrefix = "demand_t_per_h";

NetworkTopology parse_topology(const json& j, const std::string& file) {
  NetworkTopology net;
  net.name = j.value("name", "");
  net.sound_speed = need_num(j, "sound_speed_m_per_s", file);

  for (const json& n : need_array(j, "nodes", file)) {
    Node nd;
    nd.id = need_str(n, "id", file + " nodes entry");
    const std::string ctx = file + " node '" + nd.id + "'";
    nd.pressure_min = units::to_si(need_num(n, "pressure_min_bar", ctx), "bar");
    nd.pressure_max = units::to_si(need_num(n, "pressure_max_bar", ctx), "bar");
    nd.has_demand = n.value("has_demand", false);
    net.nodes.push_back(nd);
  }

  for (const json& p : need_array(j, "pipelines", file)) {
    CandidatePipeline pl;
    pl.id = need_str(p, "id", file + " pipelines entry");
    const std::string ctx = file + " pipeline '" + pl.id + "'";
    pl.from = need_str(p, "from", ctx);
    pl.to = need_str(p, "to", ctx);
    pl.length = need_num(p, "length_km", ctx) * 1000.0;
    if (p.contains("pressure_min_bar"))
      pl.pressure_min = units::to_si(need_num(p, "pressure_min_bar", ctx), "bar");
    if (p.contains("pressure_max_bar"))
      pl.pressure_max = units::to_si(need_num(p, "pressure_max_bar", ctx), "bar");
    for (const json& d : need_array(p, "catalog", ctx)) {
      DiameterOption opt;
      opt.diameter = need_num(d, "diameter_m", ctx + " catalog entry");
      opt.friction = need_num(d, "friction", ctx + " catalog entry");
      opt.invest_cost = need_num(d, "invest_cost_eur_per_yr", ctx + " catalog entry");
      pl.catalog.push_back(opt);
    }
    net.pipelines.push_back(pl);
  }

  for (const json& c : need_array(j, "compressors", file)) {
    Compressor cp;
    cp.id = need_str(c, "id", file + " compressors entry");
    const std::string ctx = file + " compressor '" + cp.id + "'";
    cp.from = need_str(c, "from", ctx);
    cp.to = need_str(c, "to", ctx);
    cp.ratio = need_num(c, "max_ratio", ctx);
    const std::string control = need_str(c, "control", ctx);
    try {
      cp.control = compressor_control_from_string(control);
    } catch (const std::invalid_argument& e) {
      fail(ctx + ": " + e.what());
    }
    net.compressors.push_back(cp);
  }

  for (const json& e : need_array(j, "electrolyzers", file)) {
    ElectrolyzerSite el;
    el.id = need_str(e, "id", file + " electrolyzers entry");
    const std::string ctx = file + " electrolyzer '" + el.id + "'";
    el.node = need_str(e, "node", ctx);
    el.efficiency =
        units::to_si(need_num(e, "efficiency_kg_per_mwh", ctx), "kg/MWh");
    el.unit_capacity = units::to_si(need_num(e, "unit_capacity_mw", ctx), "MW");
    el.max_units = need_num(e, "max_units", ctx);
    el.invest_cost = need_num(e, "invest_cost_eur_per_yr", ctx);
    el.availability_series = need_str(e, "availability_series", ctx);
    el.electricity_cost_series = need_str(e, "electricity_cost_series", ctx);
    net.electrolyzers.push_back(el);
  }

  return net;
}

json dump_topology(const NetworkTopology& net, const Scenario& sc) {
  json j;
  j["name"] = net.name;
  j["sound_speed_m_per_s"] = q12(net.sound_speed);

  json nodes = json::array();
  for (const Node& n : net.nodes) {
    json e;
    e["id"] = n.id;
    e["pressure_min_bar"] = q12(units::from_si(n.pressure_min, "bar"));
    e["pressure_max_bar"] = q12(units::from_si(n.pressure_max, "bar"));
    // The series file is the authoritative demand source; the flag mirrors it
    // so the loader can cross-check columns against the topology.
    e["has_demand"] = sc.demand.count(n.id) > 0;
    nodes.push_back(e);
  }
  j["nodes"] = nodes;

  json pipes = json::array();
  for (const CandidatePipeline& p : net.pipelines) {
    json e;
    e["id"] = p.id;
    e["from"] = p.from;
    e["to"] = p.to;
    e["length_km"] = q12(p.length / 1000.0);
    if (p.pressure_min)
      e["pressure_min_bar"] = q12(units::from_si(*p.pressure_min, "bar"));
    if (p.pressure_max)
      e["pressure_max_bar"] = q12(units::from_si(*p.pressure_max, "bar"));
    json cat = json::array();
    for (const DiameterOption& d : p.catalog) {
      json c;
      c["diameter_m"] = q12(d.diameter);
      c["friction"] = q12(d.friction);
      c["invest_cost_eur_per_yr"] = q12(d.invest_cost);
      cat.push_back(c);
    }
    e["catalog"] = cat;
    pipes.push_back(e);
  }
  j["pipelines"] = pipes;

  json comps = json::array();
  for (const Compressor& c : net.compressors) {
    json e;
    e["id"] = c.id;
    e["from"] = c.from;
    e["to"] = c.to;
    e["max_ratio"] = q12(c.ratio);
    e["control"] = to_string(c.control);
    comps.push_back(e);
  }
  j["compressors"] = comps;

  json els = json::array();
  for (const ElectrolyzerSite& el : net.electrolyzers) {
    json e;
    e["id"] = el.id;
    e["node"] = el.node;
    e["efficiency_kg_per_mwh"] = q12(units::from_si(el.efficiency, "kg/MWh"));
    e["unit_capacity_mw"] = q12(units::from_si(el.unit_capacity, "MW"));
    e["max_units"] = q12(el.max_units);
    e["invest_cost_eur_per_yr"] = q12(el.invest_cost);
    e["availability_series"] = el.availability_series;
    e["electricity_cost_series"] = el.electricity_cost_series;
    els.push_back(e);
  }
  j["electrolyzers"] = els;

  return j;
}

// --- series.csv -----------------------------------------------------------

void parse_series(const fs::path& path, Case& c) {
  const std::string file = path.string();
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) fail(file + ": empty file");

  struct Column {
    enum Kind { Avail, Cost, Demand } kind;
    std::string key;
  };

  const std::vector<std::string> header = split_csv(lines[0]);
  if (header.empty() || header[0] != "t")
    fail(file + ": first column must be 't'");

  std::vector<Column> cols;
  std::set<std::string> seen;
  for (size_t k = 1; k < header.size(); ++k) {
    const std::string& name = header[k];
    if (!seen.insert(name).second)
      fail(file + ": duplicate column '" + name + "'");
    auto colon = name.find(':');
    if (colon == std::string::npos || colon + 1 >= name.size())
      fail(file + ": column '" + name + "' is not <prefix>:<key>");
    const std::string prefix = name.substr(0, colon);
    const std::string key = name.substr(colon + 1);
    if (prefix == kAvailPrefix) {
      cols.push_back({Column::Avail, key});
    } else if (prefix == kCostPrefix) {
      cols.push_back({Column::Cost, key});
    } else if (prefix == kDemandPrefix) {
      const Node* n = c.network.find_node(key);
      if (!n) fail(file + ": demand column for unknown node '" + key + "'");
      if (!n->has_demand)
        fail(file + ": demand column for node '" + key +
             "' which is not flagged has_demand in the topology");
      cols.push_back({Column::Demand, key});
    } else {
      fail(file + ": unknown column prefix '" + prefix + "'");
    }
  }

  const int horizon = c.scenario.horizon;
  if (static_cast<int>(lines.size()) - 1 != horizon)
    fail(file + ": expected " + std::to_string(horizon) +
         " data rows for the manifest horizon, found " +
         std::to_string(lines.size() - 1));

  for (Column& col : cols) {
    std::vector<double>* dst = nullptr;
    switch (col.kind) {
      case Column::Avail: dst = &c.scenario.availability[col.key]; break;
      case Column::Cost: dst = &c.scenario.electricity_cost[col.key]; break;
      case Column::Demand: dst = &c.scenario.demand[col.key]; break;
    }
    dst->assign(static_cast<size_t>(horizon), 0.0);
  }

  for (int t = 0; t < horizon; ++t) {
    const std::string rowctx = file + " row " + std::to_string(t + 1);
    const std::vector<std::string> fields = split_csv(lines[t + 1]);
    if (fields.size() != header.size())
      fail(rowctx + ": expected " + std::to_string(header.size()) +
           " fields, found " + std::to_string(fields.size()));
    if (parse_long(fields[0], rowctx + " column 't'") != t)
      fail(rowctx + ": t must equal the row index " + std::to_string(t));
    for (size_t k = 0; k < cols.size(); ++k) {
      const std::string ctx = rowctx + " column '" + header[k + 1] + "'";
      double v = parse_double(fields[k + 1], ctx);
      if (std::isnan(v)) fail(ctx + ": NaN value");
      if (!std::isfinite(v)) fail(ctx + ": non-finite value");
      const Column& col = cols[k];
      switch (col.kind) {
        case Column::Avail:
          if (v < 0.0) fail(ctx + ": negative availability");
          c.scenario.availability[col.key][t] = units::to_si(v, "MW");
          break;
        case Column::Cost:
          c.scenario.electricity_cost[col.key][t] = units::to_si(v, "EUR/MWh");
          break;
        case Column::Demand:
          if (v < 0.0) fail(ctx + ": negative demand");
          c.scenario.demand[col.key][t] = units::to_si(v, "t/h");
          break;
      }
    }
  }

  for (const Node& n : c.network.nodes)
    if (n.has_demand && !c.scenario.demand.count(n.id))
      fail(file + ": missing demand column '" + std::string(kDemandPrefix) +
           ":" + n.id + "' for node '" + n.id + "'");
  for (const ElectrolyzerSite& e : c.network.electrolyzers) {
    if (!c.scenario.availability.count(e.availability_series))
      fail(file + ": missing column '" + std::string(kAvailPrefix) + ":" +
           e.availability_series + "' needed by electrolyzer '" + e.id + "'");
    if (!c.scenario.electricity_cost.count(e.electricity_cost_series))
      fail(file + ": missing column '" + std::string(kCostPrefix) + ":" +
           e.electricity_cost_series + "' needed by electrolyzer '" + e.id +
           "'");
  }
}

std::string dump_series(const Scenario& sc) {
  std::ostringstream out;
  out << "t";
  for (const auto& [key, _] : sc.availability)
    out << "," << kAvailPrefix << ":" << key;
  for (const auto& [key, _] : sc.electricity_cost)
    out << "," << kCostPrefix << ":" << key;
  for (const auto& [key, _] : sc.demand) out << "," << kDemandPrefix << ":" << key;
  out << "\n";
  for (int t = 0; t < sc.horizon; ++t) {
    out << t;
    for (const auto& [_, v] : sc.availability)
      out << "," << fmt12(units::from_si(v.at(t), "MW"));
    for (const auto& [_, v] : sc.electricity_cost)
      out << "," << fmt12(units::from_si(v.at(t), "EUR/MWh"));
    for (const auto& [_, v] : sc.demand)
      out << "," << fmt12(units::from_si(v.at(t), "t/h"));
    out << "\n";
  }
  return out.str();
}

}  // namespace

// --- bundle ---------------------------------------------------------------

Case load_case(const std::string& dir) {
  const fs::path d(dir);
  const fs::path mpath = d / "manifest.json";
  const std::string mctx = mpath.string();
  json manifest = read_json_file(mpath);

  const int ver = need_int(manifest, "format_version", mctx);
  if (ver != 1)
    fail(mctx + ": unsupported format_version " + std::to_string(ver));
  const json& files = need(manifest, "files", mctx);
  const std::string topo_name = need_str(files, "topology", mctx + " files");
  const std::string series_name = need_str(files, "series", mctx + " files");

  Case c;
  c.scenario.step = units::to_si(need_num(manifest, "step_h", mctx), "h");
  c.scenario.horizon = need_int(manifest, "horizon_steps", mctx);
  if (c.scenario.horizon <= 0) fail(mctx + ": horizon_steps must be positive");
  c.scenario.ns_penalty =
      need_num(manifest, "non_supply_penalty_eur_per_kg", mctx);

  const fs::path tpath = d / topo_name;
  c.network = parse_topology(read_json_file(tpath), tpath.string());
  parse_series(d / series_name, c);

  ValidationReport rep = validate(c.network, c.scenario);
  if (!rep.ok()) fail(dir + ": invalid case: " + rep.summary());
  return c;
}

void save_case(const Case& c, const std::string& dir) {
  const fs::path d(dir);
  fs::create_directories(d);

  json manifest;
  manifest["format_version"] = 1;
  manifest["files"] = {{"series", "series.csv"}, {"topology", "topology.json"}};
  manifest["step_h"] = q12(units::from_si(c.scenario.step, "h"));
  manifest["horizon_steps"] = c.scenario.horizon;
  manifest["non_supply_penalty_eur_per_kg"] = q12(c.scenario.ns_penalty);
  write_text(d / "manifest.json", manifest.dump(2) + "\n");

  write_text(d / "topology.json",
             dump_topology(c.network, c.scenario).dump(2) + "\n");
  write_text(d / "series.csv", dump_series(c.scenario));
}

std::string default_case_dir() {
  const char* env = std::getenv("H2PLAN_CASE_DIR");
  if (env && *env) return env;
  return "case";
}

// --- reference case -------------------------------------------------------

Case generate_reference_case(const GenerateOptions& opt) {
  if (!(opt.annual_demand > 0.0))
    throw std::invalid_argument("generate_reference_case: annual_demand must be positive");
  if (opt.interest_rate < 0.0 || !(opt.asset_life_years > 0.0))
    throw std::invalid_argument("generate_reference_case: bad financing options");

  const auto annualize = [&](double capex) {
    if (opt.interest_rate <= 0.0) return capex / opt.asset_life_years;
    const double r = opt.interest_rate;
    const double f = std::pow(1.0 + r, opt.asset_life_years);
    return capex * r * f / (f - 1.0);
  };

  Case c;
  NetworkTopology& net = c.network;
  net.name = "eleven-node-study";
  net.sound_speed = 1320.0;

  const std::set<std::string> demand_nodes = {"i7", "i10", "i11"};
  for (int i = 1; i <= 11; ++i) {
    Node n;
    n.id = "i" + std::to_string(i);
    n.pressure_min = units::to_si(40.0, "bar");
    n.pressure_max = units::to_si(70.0, "bar");
    n.has_demand = demand_nodes.count(n.id) > 0;
    net.nodes.push_back(n);
  }

  // 9 diameters spanning 0.5 to 1.4 m. Invest cost uses a synthetic quadratic
  // cost-per-km curve (0.20 + 0.60 D + 0.25 D^2) MEUR/km, annualized over the
  // asset life; it is a stand-in with the usual convex-increasing texture of
  // published pipeline cost tables, not a sourced figure.
  const double length_km = 60.0;
  const double roughness = 1.0e-4;
  std::vector<DiameterOption> catalog;
  for (int k = 0; k < 9; ++k) {
    DiameterOption d;
    d.diameter = 0.5 + 0.1125 * k;
    d.friction = physics::nikuradse_friction(d.diameter, roughness);
    const double capex_per_km =
        (0.20 + 0.60 * d.diameter + 0.25 * d.diameter * d.diameter) * 1.0e6;
    d.invest_cost = q12(annualize(capex_per_km * length_km));
    catalog.push_back(d);
  }

  const std::vector<std::pair<std::string, std::string>> pipe_ends = {
      {"i1", "i2"}, {"i3", "i4"}, {"i3", "i5"}, {"i4", "i6"}, {"i5", "i6"},
      {"i4", "i7"}, {"i8", "i5"}, {"i9", "i10"}, {"i9", "i11"}};
  for (size_t k = 0; k < pipe_ends.size(); ++k) {
    CandidatePipeline p;
    p.id = "p" + std::to_string(k + 1);
    p.from = pipe_ends[k].first;
    p.to = pipe_ends[k].second;
    p.length = length_km * 1000.0;
    p.catalog = catalog;
    net.pipelines.push_back(p);
  }

  for (const auto& [id, from, to] :
       std::vector<std::tuple<std::string, std::string, std::string>>{
           {"c1", "i2", "i3"}, {"c2", "i6", "i9"}}) {
    Compressor cp;
    cp.id = id;
    cp.from = from;
    cp.to = to;
    cp.ratio = 1.4;
    cp.control = CompressorControl::BoostRange;
    net.compressors.push_back(cp);
  }

  const double unit_invest = q12(annualize(3.0e6));  // one 100 MW plant
  for (const auto& [id, node, series, max_units] :
       std::vector<std::tuple<std::string, std::string, std::string, double>>{
           {"e_wind", "i1", "wind", 800.0}, {"e_solar", "i8", "solar", 2000.0}}) {
    ElectrolyzerSite e;
    e.id = id;
    e.node = node;
    e.efficiency = units::to_si(18.2, "kg/MWh");
    e.unit_capacity = units::to_si(100.0, "MW");
    e.max_units = max_units;
    e.invest_cost = unit_invest;
    e.availability_series = series;
    e.electricity_cost_series = series;
    net.electrolyzers.push_back(e);
  }

  Scenario& sc = c.scenario;
  sc.step = 3600.0;
  sc.horizon = 24;
  sc.ns_penalty = 100.0;

  const double cap = units::to_si(100.0, "MW");
  auto& wind = sc.availability["wind"];
  auto& solar = sc.availability["solar"];
  for (int t = 0; t < 24; ++t) {
    // Diurnal wind with a deep minimum around 02:00; production at night
    // leans entirely on this profile, which is what eventually produces
    // non-supplied hydrogen as demand grows.
    wind.push_back(q12(cap * (0.38 - 0.24 * std::cos(2.0 * kPi * (t - 2) / 24.0))));
    double s = 0.0;
    if (t > 6 && t < 18) {
      const double x = std::sin(kPi * (t - 6) / 12.0);
      s = cap * x * x;
    }
    solar.push_back(q12(s));
  }
  sc.electricity_cost["wind"].assign(24, units::to_si(2.5, "EUR/MWh"));
  sc.electricity_cost["solar"].assign(24, units::to_si(1.0, "EUR/MWh"));

  // Demand shapes are cosine perturbations with exact mean 1 on the hourly
  // grid, so nodal shares hold exactly at every annual level.
  const double mean_flow = opt.annual_demand / units::seconds_per_year;
  const std::vector<std::pair<std::string, double>> shares = {
      {"i7", 0.40}, {"i10", 0.35}, {"i11", 0.25}};
  for (const auto& [node, share] : shares) {
    auto& d = sc.demand[node];
    for (int t = 0; t < 24; ++t) {
      double shape;
      if (node == "i7") {
        shape = 1.0 - 0.10 * std::cos(2.0 * kPi * (t - 4) / 24.0);
      } else {
        shape = 1.0 + 0.35 * std::cos(2.0 * kPi * (t - 19) / 24.0);
      }
      d.push_back(q12(mean_flow * share * shape));
    }
  }

  ValidationReport rep = validate(net, sc);
  if (!rep.ok())
    throw std::logic_error("generate_reference_case: " + rep.summary());
  return c;
}

// --- investment plans -----------------------------------------------------

void save_plan(const InvestmentPlan& plan, const std::string& path) {
  json j;
  json dc = json::object();
  for (const auto& [pipe, d] : plan.diameter_choice) dc[pipe] = d;
  json eu = json::object();
  for (const auto& [site, u] : plan.electrolyzer_units) eu[site] = q12(u);
  j["diameter_choice"] = dc;
  j["electrolyzer_units"] = eu;
  write_text(path, j.dump(2) + "\n");
}

InvestmentPlan load_plan(const std::string& path) {
  const json j = read_json_file(path);
  InvestmentPlan p;
  const json& dc = need(j, "diameter_choice", path);
  if (!dc.is_object()) fail(path + ": diameter_choice must be an object");
  for (auto it = dc.begin(); it != dc.end(); ++it) {
    if (!it.value().is_number_integer())
      fail(path + ": diameter_choice['" + it.key() + "'] must be an integer");
    p.diameter_choice[it.key()] = it.value().get<int>();
  }
  const json& eu = need(j, "electrolyzer_units", path);
  if (!eu.is_object()) fail(path + ": electrolyzer_units must be an object");
  for (auto it = eu.begin(); it != eu.end(); ++it) {
    if (!it.value().is_number())
      fail(path + ": electrolyzer_units['" + it.key() + "'] must be a number");
    const double v = it.value().get<double>();
    if (!std::isfinite(v) || v < 0.0)
      fail(path + ": electrolyzer_units['" + it.key() +
           "'] must be finite and non-negative");
    p.electrolyzer_units[it.key()] = v;
  }
  return p;
}

// --- sweep CSV ------------------------------------------------------------

namespace {

const char* kSweepHeader =
    "demand_level_kg_per_yr,model,ok,error,"
    "planning_status,planning_segments,planning_objective_eur_per_yr,"
    "planning_bound_eur_per_yr,planning_gap,planning_nodes,"
    "planning_lp_iterations,planning_electrolyzer_invest_eur_per_yr,"
    "planning_pipeline_invest_eur_per_yr,planning_operating_cost_eur_per_yr,"
    "planning_penalty_cost_eur_per_yr,planning_non_supplied_kg_per_yr,"
    "validation_status,validation_objective_eur_per_yr,"
    "validation_non_supplied_kg_per_yr,validation_max_linepack_swing_kg,"
    "regret";

double max_swing(const KpiRow& kpi) {
  double m = 0.0;
  for (const auto& [_, v] : kpi.linepack_swing) m = std::max(m, v);
  return m;
}

}  // namespace

void save_sweep_csv(const SweepReport& rep, const std::string& path) {
  std::ostringstream out;
  out << kSweepHeader << "\n";
  for (const SweepCell& c : rep.cells) {
    out << fmt12(c.demand_level) << "," << to_string(c.model) << ","
        << (c.ok ? 1 : 0) << "," << csv_escape(c.error) << ","
        << to_string(c.planning.status) << "," << c.planning.segments << ","
        << fmt12(c.planning.objective) << "," << fmt12(c.planning.bound) << ","
        << fmt12(c.planning.gap) << "," << c.planning.nodes << ","
        << c.planning.lp_iterations << ","
        << fmt12(c.planning.kpi.electrolyzer_invest) << ","
        << fmt12(c.planning.kpi.pipeline_invest) << ","
        << fmt12(c.planning.kpi.operating_cost) << ","
        << fmt12(c.planning.kpi.penalty_cost) << ","
        << fmt12(c.planning.kpi.non_supplied) << ","
        << to_string(c.validation.status) << ","
        << fmt12(c.validation.objective) << ","
        << fmt12(c.validation.kpi.non_supplied) << ","
        << fmt12(max_swing(c.validation.kpi)) << "," << fmt12(c.regret)
        << "\n";
  }
  write_text(path, out.str());
}

SweepReport load_sweep_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) fail(path + ": empty file");
  if (lines[0] != kSweepHeader)
    fail(path + ": unexpected header (not a sweep CSV of this tool)");

  const size_t ncols = split_csv(kSweepHeader).size();
  SweepReport rep;
  for (size_t r = 1; r < lines.size(); ++r) {
    const std::string ctx = path + " row " + std::to_string(r);
    const std::vector<std::string> f = split_csv(lines[r]);
    if (f.size() != ncols)
      fail(ctx + ": expected " + std::to_string(ncols) + " fields, found " +
           std::to_string(f.size()));
    SweepCell c;
    size_t k = 0;
    c.demand_level = parse_double(f[k++], ctx);
    try {
      c.model = flow_model_from_string(f[k]);
    } catch (const std::invalid_argument& e) {
      fail(ctx + ": " + e.what());
    }
    ++k;
    c.ok = parse_long(f[k++], ctx) != 0;
    c.error = f[k++];
    c.planning.model = c.model;
    c.planning.status = milp_status_from_string(f[k++], ctx);
    c.planning.segments = static_cast<int>(parse_long(f[k++], ctx));
    c.planning.objective = parse_double(f[k++], ctx);
    c.planning.bound = parse_double(f[k++], ctx);
    c.planning.gap = parse_double(f[k++], ctx);
    c.planning.nodes = parse_long(f[k++], ctx);
    c.planning.lp_iterations = parse_long(f[k++], ctx);
    c.planning.kpi.electrolyzer_invest = parse_double(f[k++], ctx);
    c.planning.kpi.pipeline_invest = parse_double(f[k++], ctx);
    c.planning.kpi.operating_cost = parse_double(f[k++], ctx);
    c.planning.kpi.penalty_cost = parse_double(f[k++], ctx);
    c.planning.kpi.non_supplied = parse_double(f[k++], ctx);
    c.planning.has_plan = c.ok;
    c.validation.model = FlowModelChoice::Dynamic;
    c.validation.status = milp_status_from_string(f[k++], ctx);
    c.validation.objective = parse_double(f[k++], ctx);
    c.validation.kpi.non_supplied = parse_double(f[k++], ctx);
    c.validation.kpi.linepack_swing["all"] = parse_double(f[k++], ctx);
    c.validation.has_plan = c.ok;
    c.regret = parse_double(f[k++], ctx);
    rep.cells.push_back(std::move(c));
  }

  for (const SweepCell& c : rep.cells) {
    if (std::find(rep.levels.begin(), rep.levels.end(), c.demand_level) ==
        rep.levels.end())
      rep.levels.push_back(c.demand_level);
    if (std::find(rep.models.begin(), rep.models.end(), c.model) ==
        rep.models.end())
      rep.models.push_back(c.model);
  }
  return rep;
}

}  // namespace h2plan
