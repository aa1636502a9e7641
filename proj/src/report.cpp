#include "grushin/report.hpp"

#include <algorithm>
#include <cstdio>

namespace grushin {

double ResidualReport::max_rel() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.rel_res);
  return m;
}

double ResidualReport::mean_rel() const {
  if (records.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : records) s += r.rel_res;
  return s / static_cast<double>(records.size());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_reports_csv(std::ostream& os, const std::vector<ResidualReport>& reports,
                       const std::string& header_comment) {
  size_t width = 0;
  for (const auto& rep : reports)
    for (const auto& r : rep.records) width = std::max(width, static_cast<size_t>(r.coords.size()));

  os << "# " << header_comment << "\n";
  os << "suite";
  for (size_t i = 0; i < width; ++i) os << ",x" << i;
  os << ",lhs,rhs,abs_res,rel_res\n";
  for (const auto& rep : reports) {
    for (const auto& r : rep.records) {
      os << rep.suite;
      for (size_t i = 0; i < width; ++i) {
        os << ',';
        if (i < static_cast<size_t>(r.coords.size())) os << format_double(r.coords(static_cast<int>(i)));
      }
      os << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
         << format_double(r.abs_res) << ',' << format_double(r.rel_res) << "\n";
    }
  }
}

nlohmann::json reports_aggregate_json(const std::vector<ResidualReport>& reports,
                                      const nlohmann::json& meta) {
  nlohmann::json suites = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& rep : reports) {
    all_pass = all_pass && rep.pass();
    suites.push_back({{"suite", rep.suite},
                      {"tolerance", rep.tolerance},
                      {"max_rel", rep.max_rel()},
                      {"mean_rel", rep.mean_rel()},
                      {"count", rep.count()},
                      {"excluded_count", rep.excluded_count},
                      {"pass", rep.pass()}});
  }
  return nlohmann::json{{"meta", meta}, {"suites", suites}, {"all_pass", all_pass}};
}

}  // namespace grushin
