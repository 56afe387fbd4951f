#pragma once

#include <json.hpp>
#include <string>

#include "qmorse/qseries.hpp"
#include "qmorse/scalar_series.hpp"

namespace qmorse {

using Json = nlohmann::json;

Json coefficient_to_json(const Coefficient& c);
Coefficient coefficient_from_json(const Json& j);

// qseries-v1 documents. `approx` adds a float rendering next to each exact
// coefficient; readers ignore it.
Json to_json(const QSeries& f, bool approx = false);
Json to_json(const ScalarSeries& s, bool approx = false);
QSeries qseries_from_json(const Json& j);
ScalarSeries scalar_series_from_json(const Json& j);

// Canonical text: sorted keys, two-space indent.
std::string dump(const Json& j);

}  // namespace qmorse
