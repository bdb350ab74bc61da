#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "h2plan/scenario.hpp"

namespace h2plan {

enum class RowSense { LE, EQ, GE };

struct Column {
  std::string tag;  // role-named provenance, e.g. "flow_in[t=0003,a=a4]"
  double lb = 0.0;
  double ub = 0.0;
  double obj = 0.0;
  bool binary = false;
};

struct RowEntry {
  int col = -1;
  double coef = 0.0;
};

struct Row {
  std::string tag;
  RowSense sense = RowSense::EQ;
  double rhs = 0.0;
  std::vector<RowEntry> entries;  // sorted by col, unique, after finalize
};

// One piecewise-linear interpolation term y ~ g(x) on an equidistant grid.
struct PwlTermInfo {
  std::string tag;
  int x_col = -1;
  int y_col = -1;
  std::vector<int> delta_cols;  // K segment fill variables
  std::vector<int> fill_cols;   // K-1 ordering binaries (empty when degenerate)
  std::vector<double> breaks;   // K+1 breakpoints
  std::vector<double> values;   // g at breakpoints
  double max_error = 0.0;       // max |interpolant - g| over the domain

  int segment_of(double x) const;
  double interp(double x) const;
  double value_span() const;
};

// Sparse mixed-binary linear program, built by the formulation layer and
// consumed by the solver. Mutable while building; finalize() freezes it,
// sorts columns lexicographically by tag and validates invariants.
class MilpInstance {
 public:
  int add_column(std::string tag, double lb, double ub, double obj, bool binary);
  int add_row(std::string tag, RowSense sense, double rhs,
              std::vector<RowEntry> entries);
  void register_pwl_term(PwlTermInfo info);
  void register_choice_group(std::vector<int> binary_cols);

  // Sorts columns by tag, remaps rows/terms/groups, checks invariants:
  // unique non-empty tags, finite bounds, lb <= ub, binaries in {0,1} bounds,
  // entries reference valid columns exactly once per row.
  void finalize();
  bool finalized() const { return finalized_; }

  int n_cols() const { return static_cast<int>(cols_.size()); }
  int n_rows() const { return static_cast<int>(rows_.size()); }
  const Column& col(int j) const { return cols_[j]; }
  const Row& row(int i) const { return rows_[i]; }
  const std::vector<Column>& cols() const { return cols_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<PwlTermInfo>& pwl_terms() const { return pwl_terms_; }
  const std::vector<std::vector<int>>& choice_groups() const { return choice_groups_; }

  // Index lookup by tag after finalize; -1 when absent.
  int column_index(const std::string& tag) const;
  // Throwing variant, for extraction paths that require presence.
  int require_column(const std::string& tag) const;

  void set_bounds(int j, double lb, double ub);

  FlowModelChoice model = FlowModelChoice::Transport;
  int pwl_segments = 0;
  std::string name;

  // Original bounds recorded by fix_investments, keyed by column tag.
  std::map<std::string, std::pair<double, double>> pinned_bounds;

  // Count of columns per tag family (prefix before '['), for audits.
  std::map<std::string, int> column_family_counts() const;
  std::map<std::string, int> row_family_counts() const;

 private:
  std::vector<Column> cols_;
  std::vector<Row> rows_;
  std::vector<PwlTermInfo> pwl_terms_;
  std::vector<std::vector<int>> choice_groups_;
  std::map<std::string, int> col_index_;
  bool finalized_ = false;
};

// Plain-text persistence: `path` holds one row per line as
// "sense rhs col:coef ..."; `path`.provenance holds column and row tags with
// bounds, objective and binary markers.
void export_instance(const MilpInstance& inst, const std::string& path);
MilpInstance import_instance(const std::string& path);

}  // namespace h2plan
