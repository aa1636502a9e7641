#pragma once

#include "grushin/types.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace grushin {

struct PointRecord {
  Vec coords;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_res = 0.0;
  double rel_res = 0.0;
};

/// Per-suite residual records plus aggregates; pass <=> max_rel <= tolerance.
struct ResidualReport {
  std::string suite;
  double tolerance = 0.0;
  std::vector<PointRecord> records;
  long excluded_count = 0;

  void add(const Vec& coords, double lhs, double rhs, double normalizer) {
    PointRecord r;
    r.coords = coords;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_res = std::abs(lhs - rhs);
    r.rel_res = r.abs_res / normalizer;
    records.push_back(std::move(r));
  }

  /// Residual normalized relative to max(1, |rhs|).
  void add(const Vec& coords, double lhs, double rhs) {
    add(coords, lhs, rhs, std::max(1.0, std::abs(rhs)));
  }

  size_t count() const { return records.size(); }
  double max_rel() const;
  double mean_rel() const;
  bool pass() const { return max_rel() <= tolerance; }
};

/// 17-significant-digit decimal form (round-trips doubles bit-exactly).
std::string format_double(double v);

/// Per-point CSV: header line `suite,x0,...,x{n-1},lhs,rhs,abs_res,rel_res`
/// with n the widest coordinate count; shorter points pad empty fields.
/// `header_comment` goes on the first line (the only non-deterministic line).
void write_reports_csv(std::ostream& os, const std::vector<ResidualReport>& reports,
                       const std::string& header_comment);

/// Aggregates (max/mean/count/excluded/pass per suite) plus run metadata.
nlohmann::json reports_aggregate_json(const std::vector<ResidualReport>& reports,
                                      const nlohmann::json& meta);

}  // namespace grushin
