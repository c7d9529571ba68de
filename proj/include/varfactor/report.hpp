#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "varfactor/bench.hpp"
#include "varfactor/engine.hpp"

namespace varfactor {

/// Stable JSON form of a factorization. `time_ms` is reported as given so
/// callers can pin it to 0 for reproducible output.
nlohmann::json to_json(const FactorizationResult& result, const RationalPolynomial& input,
                       const std::vector<std::string>& variables, long long time_ms);

std::string to_text(const FactorizationResult& result, const RationalPolynomial& input,
                    const std::vector<std::string>& variables, long long time_ms);

nlohmann::json to_json(const BenchReport& report);
std::string to_text(const BenchReport& report);

}  // namespace varfactor
