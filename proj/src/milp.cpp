#include "h2plan/milp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace h2plan {

int PwlTermInfo::segment_of(double x) const {
  int k = static_cast<int>(breaks.size()) - 2;  // last segment index
  for (int s = 0; s < static_cast<int>(breaks.size()) - 1; ++s) {
    if (x <= breaks[s + 1]) return s;
  }
  return k;
}

double PwlTermInfo::interp(double x) const {
  int s = segment_of(x);
  double w = breaks[s + 1] - breaks[s];
  if (w <= 0.0) return values[s];
  double a = (x - breaks[s]) / w;
  return values[s] + a * (values[s + 1] - values[s]);
}

double PwlTermInfo::value_span() const {
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

int MilpInstance::add_column(std::string tag, double lb, double ub, double obj,
                             bool binary) {
  if (finalized_) throw std::logic_error("instance already finalized");
  cols_.push_back(Column{std::move(tag), lb, ub, obj, binary});
  return static_cast<int>(cols_.size()) - 1;
}

int MilpInstance::add_row(std::string tag, RowSense sense, double rhs,
                          std::vector<RowEntry> entries) {
  if (finalized_) throw std::logic_error("instance already finalized");
  rows_.push_back(Row{std::move(tag), sense, rhs, std::move(entries)});
  return static_cast<int>(rows_.size()) - 1;
}

void MilpInstance::register_pwl_term(PwlTermInfo info) {
  pwl_terms_.push_back(std::move(info));
}

void MilpInstance::register_choice_group(std::vector<int> binary_cols) {
  choice_groups_.push_back(std::move(binary_cols));
}

void MilpInstance::finalize() {
  if (finalized_) throw std::logic_error("instance already finalized");

  const int n = n_cols();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return cols_[a].tag < cols_[b].tag; });
  std::vector<int> perm(n);  // old index -> new index
  for (int k = 0; k < n; ++k) perm[order[k]] = k;

  std::vector<Column> sorted;
  sorted.reserve(n);
  for (int k = 0; k < n; ++k) sorted.push_back(std::move(cols_[order[k]]));
  cols_ = std::move(sorted);

  auto remap = [&](int& j) {
    if (j < 0 || j >= n) throw std::logic_error("column index out of range");
    j = perm[j];
  };

  for (auto& row : rows_) {
    for (auto& e : row.entries) remap(e.col);
    std::sort(row.entries.begin(), row.entries.end(),
              [](const RowEntry& a, const RowEntry& b) { return a.col < b.col; });
  }
  for (auto& term : pwl_terms_) {
    remap(term.x_col);
    remap(term.y_col);
    for (auto& j : term.delta_cols) remap(j);
    for (auto& j : term.fill_cols) remap(j);
  }
  for (auto& group : choice_groups_)
    for (auto& j : group) remap(j);

  col_index_.clear();
  for (int j = 0; j < n; ++j) {
    const auto& c = cols_[j];
    if (c.tag.empty()) throw std::logic_error("column without provenance tag");
    if (!col_index_.emplace(c.tag, j).second)
      throw std::logic_error("duplicate column tag '" + c.tag + "'");
    if (!std::isfinite(c.lb) || !std::isfinite(c.ub) || c.lb > c.ub)
      throw std::logic_error("column '" + c.tag + "' has invalid bounds");
    if (c.binary) {
      bool ok = (c.lb == 0.0 || c.lb == 1.0) && (c.ub == 0.0 || c.ub == 1.0);
      if (!ok) throw std::logic_error("binary column '" + c.tag + "' bounds not in {0,1}");
    }
    if (!std::isfinite(c.obj)) throw std::logic_error("non-finite objective");
  }

  std::set<std::string> row_tags;
  for (const auto& row : rows_) {
    if (row.tag.empty()) throw std::logic_error("row without provenance tag");
    if (!row_tags.insert(row.tag).second)
      throw std::logic_error("duplicate row tag '" + row.tag + "'");
    if (!std::isfinite(row.rhs)) throw std::logic_error("non-finite rhs");
    if (row.entries.empty()) throw std::logic_error("empty row '" + row.tag + "'");
    for (size_t k = 0; k < row.entries.size(); ++k) {
      if (!std::isfinite(row.entries[k].coef))
        throw std::logic_error("non-finite coefficient in row '" + row.tag + "'");
      if (k > 0 && row.entries[k].col == row.entries[k - 1].col)
        throw std::logic_error("duplicate column in row '" + row.tag + "'");
    }
  }

  finalized_ = true;
}

int MilpInstance::column_index(const std::string& tag) const {
  auto it = col_index_.find(tag);
  return it == col_index_.end() ? -1 : it->second;
}

int MilpInstance::require_column(const std::string& tag) const {
  int j = column_index(tag);
  if (j < 0) throw std::invalid_argument("no column tagged '" + tag + "'");
  return j;
}

void MilpInstance::set_bounds(int j, double lb, double ub) {
  if (!std::isfinite(lb) || !std::isfinite(ub) || lb > ub)
    throw std::invalid_argument("invalid bounds");
  cols_.at(j).lb = lb;
  cols_.at(j).ub = ub;
}

namespace {

std::map<std::string, int> family_counts(auto&& items) {
  std::map<std::string, int> counts;
  for (const auto& item : items) {
    auto pos = item.tag.find('[');
    counts[item.tag.substr(0, pos)]++;
  }
  return counts;
}

const char* sense_str(RowSense s) {
  switch (s) {
    case RowSense::LE: return "<=";
    case RowSense::EQ: return "=";
    case RowSense::GE: return ">=";
  }
  return "?";
}

RowSense sense_from(const std::string& s) {
  if (s == "<=") return RowSense::LE;
  if (s == "=") return RowSense::EQ;
  if (s == ">=") return RowSense::GE;
  throw std::runtime_error("bad row sense '" + s + "'");
}

}  // namespace

std::map<std::string, int> MilpInstance::column_family_counts() const {
  return family_counts(cols_);
}

std::map<std::string, int> MilpInstance::row_family_counts() const {
  return family_counts(rows_);
}

void export_instance(const MilpInstance& inst, const std::string& path) {
  if (!inst.finalized()) throw std::logic_error("export requires finalized instance");
  std::ofstream rows(path);
  if (!rows) throw std::runtime_error("cannot write '" + path + "'");
  rows.precision(17);
  for (int i = 0; i < inst.n_rows(); ++i) {
    const Row& r = inst.row(i);
    rows << sense_str(r.sense) << " " << r.rhs;
    for (const auto& e : r.entries) rows << " " << e.col << ":" << e.coef;
    rows << "\n";
  }
  std::ofstream prov(path + ".provenance");
  if (!prov) throw std::runtime_error("cannot write '" + path + ".provenance'");
  prov.precision(17);
  prov << "model " << to_string(inst.model) << " segments " << inst.pwl_segments
       << "\n";
  for (int j = 0; j < inst.n_cols(); ++j) {
    const Column& c = inst.col(j);
    prov << "col " << j << " " << c.tag << " " << c.lb << " " << c.ub << " "
         << c.obj << " " << (c.binary ? 1 : 0) << "\n";
  }
  for (int i = 0; i < inst.n_rows(); ++i)
    prov << "row " << i << " " << inst.row(i).tag << "\n";
}

MilpInstance import_instance(const std::string& path) {
  std::ifstream prov(path + ".provenance");
  if (!prov) throw std::runtime_error("cannot read '" + path + ".provenance'");
  MilpInstance inst;
  std::string line;
  std::vector<std::string> row_tags;
  bool first = true;
  while (std::getline(prov, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    if (first) {
      std::string kw, model, segkw;
      int segments = 0;
      is >> kw >> model >> segkw >> segments;
      if (kw != "model") throw std::runtime_error("bad provenance header");
      inst.model = flow_model_from_string(model);
      inst.pwl_segments = segments;
      first = false;
      continue;
    }
    std::string kind;
    is >> kind;
    if (kind == "col") {
      int idx, binary;
      std::string tag;
      double lb, ub, obj;
      is >> idx >> tag >> lb >> ub >> obj >> binary;
      if (!is) throw std::runtime_error("bad provenance col line: " + line);
      int j = inst.add_column(tag, lb, ub, obj, binary != 0);
      if (j != idx) throw std::runtime_error("provenance col order mismatch");
    } else if (kind == "row") {
      int idx;
      std::string tag;
      is >> idx >> tag;
      if (!is) throw std::runtime_error("bad provenance row line: " + line);
      if (idx != static_cast<int>(row_tags.size()))
        throw std::runtime_error("provenance row order mismatch");
      row_tags.push_back(tag);
    } else {
      throw std::runtime_error("bad provenance line: " + line);
    }
  }

  std::ifstream rows(path);
  if (!rows) throw std::runtime_error("cannot read '" + path + "'");
  size_t i = 0;
  while (std::getline(rows, line)) {
    if (line.empty()) continue;
    if (i >= row_tags.size()) throw std::runtime_error("more rows than provenance tags");
    std::istringstream is(line);
    std::string sense;
    double rhs;
    is >> sense >> rhs;
    std::vector<RowEntry> entries;
    std::string tok;
    while (is >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("bad row entry '" + tok + "'");
      entries.push_back(RowEntry{std::stoi(tok.substr(0, colon)),
                                 std::stod(tok.substr(colon + 1))});
    }
    inst.add_row(row_tags[i], sense_from(sense), rhs, std::move(entries));
    ++i;
  }
  if (i != row_tags.size()) throw std::runtime_error("fewer rows than provenance tags");
  inst.finalize();
  return inst;
}

}  // namespace h2plan
