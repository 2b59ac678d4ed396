#pragma once

// Tabular output shared by the CLI and the regression tests. Doubles are
// written in the shortest form that round-trips, so identical inputs give
// identical bytes.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lmoment/averages.hpp"
#include "lmoment/summation.hpp"

namespace lmoment {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("lmoment::format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

/// One CSV cell: empty, integer, float, boolean or text.
using Cell = std::variant<std::monostate, std::int64_t, double, bool, std::string>;

inline std::string to_csv_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

inline nlohmann::ordered_json to_json_value(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<Cell> row) {
    if (row.size() != header_.size()) throw std::invalid_argument("lmoment::Table: row width mismatch");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  /// Header line then one line per row, LF-terminated.
  std::string to_csv() const {
    std::string out;
    append_line(out, header_);
    for (const auto& row : rows_) {
      std::vector<std::string> cells;
      cells.reserve(row.size());
      for (const auto& c : row) cells.push_back(to_csv_text(c));
      append_line(out, cells);
    }
    return out;
  }

  /// Array of objects keyed by the header names, in column order.
  std::string to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t k = 0; k < row.size(); ++k) obj[header_[k]] = to_json_value(row[k]);
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }

 private:
  static void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k > 0) out += ',';
      out += cells[k];
    }
    out += '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

inline Cell int_cell(u64 v) { return static_cast<std::int64_t>(v); }

struct ExperimentRow {
  MomentBreakdown moments;
  std::optional<double> wall_time_ms;
};

inline const std::vector<std::string>& experiment_header() {
  static const std::vector<std::string> h{"q",  "N",  "S_direct", "S_proxy", "M1", "M2", "principal_term",
                                          "alpha", "alpha_error_bound", "ratio", "wall_time_ms"};
  return h;
}

inline Table experiment_table(std::span<const ExperimentRow> rows) {
  Table t(experiment_header());
  for (const auto& r : rows) {
    const auto& m = r.moments;
    t.add_row({int_cell(m.q), int_cell(m.N), m.s_direct, m.s_proxy, m.m1, m.m2, m.principal_term, m.alpha,
               m.alpha_error_bound, m.ratio ? Cell{*m.ratio} : Cell{},
               r.wall_time_ms ? Cell{*r.wall_time_ms} : Cell{}});
  }
  return t;
}

/// Least-squares line through (ln x, ln y).
struct FitResult {
  double slope;
  double intercept;
  double residual_rms;
  std::size_t points;
};

inline FitResult fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("lmoment::fit_loglog: size mismatch");
  if (xs.size() < 4) throw std::invalid_argument("lmoment::fit_loglog: at least 4 points required");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(xs[k] > 0.0) || !(ys[k] > 0.0)) {
      throw std::domain_error("lmoment::fit_loglog: coordinates must be positive");
    }
    lx[k] = std::log(xs[k]);
    ly[k] = std::log(ys[k]);
  }
  const double mx = compensated_total(lx) / static_cast<double>(n);
  const double my = compensated_total(ly) / static_cast<double>(n);
  CompensatedSum sxx, sxy;
  for (std::size_t k = 0; k < n; ++k) {
    sxx.add((lx[k] - mx) * (lx[k] - mx));
    sxy.add((lx[k] - mx) * (ly[k] - my));
  }
  if (sxx.value() == 0.0) throw std::domain_error("lmoment::fit_loglog: x values are all equal");
  const double slope = sxy.value() / sxx.value();
  const double intercept = my - slope * mx;
  CompensatedSum rss;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = ly[k] - (intercept + slope * lx[k]);
    rss.add(e * e);
  }
  return {slope, intercept, std::sqrt(rss.value() / static_cast<double>(n)), n};
}

inline constexpr double kCubicExponent = 3.0;
inline constexpr double kQuadraticExponent = 2.0;

inline Table fit_table(u64 q, const FitResult& fit) {
  Table t({"q", "points", "slope", "intercept", "residual_rms", "gap_to_cubic", "gap_to_quadratic"});
  t.add_row({int_cell(q), int_cell(fit.points), fit.slope, fit.intercept, fit.residual_rms,
             fit.slope - kCubicExponent, fit.slope - kQuadraticExponent});
  return t;
}

/// M2(q, N) for each N and the log-log fit of M2 against N.
struct M2Scan {
  std::vector<u64> Ns;
  std::vector<double> m2;
  FitResult fit;
};

inline M2Scan m2_scan(u64 q, std::span<const u64> Ns, unsigned threads = 1) {
  const auto h = harmonic_class_table(q, threads);
  M2Scan out;
  out.Ns.assign(Ns.begin(), Ns.end());
  std::vector<double> xs;
  for (u64 N : Ns) {
    out.m2.push_back(m2(q, N, h, threads));
    xs.push_back(static_cast<double>(N));
  }
  out.fit = fit_loglog(xs, out.m2);
  return out;
}

inline Table m2_scan_table(u64 q, const M2Scan& scan) {
  Table t({"q", "N", "M2"});
  for (std::size_t k = 0; k < scan.Ns.size(); ++k) t.add_row({int_cell(q), int_cell(scan.Ns[k]), scan.m2[k]});
  return t;
}

}  // namespace lmoment
