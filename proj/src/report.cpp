#include "varfactor/report.hpp"

#include <cstdio>
#include <sstream>

namespace varfactor {

nlohmann::json to_json(const FactorizationResult& result, const RationalPolynomial& input,
                       const std::vector<std::string>& variables, long long time_ms) {
  nlohmann::json j;
  j["input"] = to_string(input, variables);
  j["unit"] = to_string(result.unit);
  j["factors"] = nlohmann::json::array();
  for (const auto& f : result.factors) j["factors"].push_back(to_string(f, variables));
  j["complete"] = result.complete;
  const auto& d = result.diagnostics;
  j["diagnostics"] = {
      {"precision_bits", d.precision_bits},
      {"L", d.L.fits_slong_p() ? nlohmann::json(d.L.get_si()) : nlohmann::json(d.L.get_str())},
      {"residuals", d.residuals},
      {"seed", d.seed},
      {"time_ms", time_ms},
  };
  return j;
}

std::string to_text(const FactorizationResult& result, const RationalPolynomial& input,
                    const std::vector<std::string>& variables, long long time_ms) {
  std::ostringstream out;
  out << "input: " << to_string(input, variables) << '\n';
  out << "unit: " << to_string(result.unit) << '\n';
  out << "factors:\n";
  for (std::size_t i = 0; i < result.factors.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", result.diagnostics.residuals[i]);
    out << "  " << to_string(result.factors[i], variables) << "    [r = " << buf << "]\n";
  }
  out << "complete: " << (result.complete ? "yes" : "no") << '\n';
  out << "precision_bits: " << result.diagnostics.precision_bits << "  L: " << result.diagnostics.L.get_str()
      << "  seed: " << result.diagnostics.seed << "  time_ms: " << time_ms << '\n';
  for (const auto& t : result.diagnostics.trace) out << "  # " << t << '\n';
  return out.str();
}

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json j;
  j["trials"] = nlohmann::json::array();
  for (const auto& t : report.trials) {
    j["trials"].push_back({{"index", t.index},
                           {"input", t.input},
                           {"success", t.success},
                           {"exact", t.exact},
                           {"time_ms", t.time_ms},
                           {"factors", t.factors_found},
                           {"error", t.error}});
  }
  j["success_rate"] = report.success_rate;
  j["median_ms"] = report.median_ms;
  return j;
}

std::string to_text(const BenchReport& report) {
  std::ostringstream out;
  char line[128];
  out << "trial  success  exact  factors   time_ms\n";
  for (const auto& t : report.trials) {
    std::snprintf(line, sizeof line, "%5zu  %7s  %5s  %7zu  %8.1f", t.index, t.success ? "yes" : "no",
                  t.exact ? "yes" : "no", t.factors_found, t.time_ms);
    out << line;
    if (!t.error.empty()) out << "  (" << t.error << ")";
    out << '\n';
  }
  std::snprintf(line, sizeof line, "success rate %.1f%%, median %.1f ms", 100.0 * report.success_rate,
                report.median_ms);
  out << line << '\n';
  return out.str();
}

}  // namespace varfactor
