#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "regime/clustering.hpp"
#include "regime/hmm.hpp"
#include "regime/measures.hpp"
#include "regime/synthetic.hpp"

namespace regime {

// CSV schema: header "timestamp,price"; timestamps ISO-8601 or integer index.
PriceStream read_price_csv(const std::filesystem::path& path);
void write_price_csv(const std::filesystem::path& path, const PriceStream& stream);

PriceStream to_price_stream(const PathRecord& record);

// All floats are serialized via nlohmann::json, which emits round-trip-exact
// shortest representations.
nlohmann::json to_json(const RegimeSchedule& schedule);
RegimeSchedule schedule_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GaussianHmm& hmm);

nlohmann::json to_json(const KMeansResult<EmpiricalMeasure>& res);
nlohmann::json to_json(const KMeansResult<std::vector<double>>& res);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// One value per row, printed with 17 significant digits.
void write_value_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<double>& values);

}  // namespace regime
