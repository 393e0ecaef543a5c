#pragma once

// JSON and CSV encoding of models, menus and reports.

#include <string>
#include <vector>

#include "json.hpp"
#include "surplus/duality.hpp"
#include "surplus/extraction.hpp"
#include "surplus/models.hpp"

namespace surplus::io {

using nlohmann::json;

/// 17 significant digits, '.' decimal point, independent of locale.
std::string format_double(double x);

json to_json(const models::TabularModel& m);
/// Expects {"states", "types", "beliefs", "values"[, "params"]}; throws InvalidModel.
models::TabularModel tabular_from_json(const json& j);

json to_json(const extraction::Menu& menu);
extraction::Menu menu_from_json(const json& j);

json to_json(const extraction::Classification& c);
json to_json(const extraction::ExtractionReport& r);
json to_json(const extraction::FullLpResult& r);
json to_json(const extraction::TypeLog& log);
json to_json(const extraction::CompressResult& r);
/// nu is written as sparse [t, s, weight] triplets.
json to_json(const duality::DualityReport& r);

/// Writes `rows` under `header` as comma-separated values.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace surplus::io
