#pragma once

// Report serialization. Numbers are written with 17 significant digits so
// they parse back to the same double; non-finite values become the strings
// "inf", "-inf" and "nan" in both JSON and CSV.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "renyi_reach/harness.hpp"
#include "renyi_reach/spectral_bounds.hpp"

namespace renyi_reach::io {

using Json = nlohmann::ordered_json;

std::string format_number(double x);

/// Inverse of format_number. Throws std::invalid_argument on malformed text.
double parse_number(const std::string& text);

/// Number or one of the non-finite strings.
Json number(double x);
double number_from(const Json& j);

/// Deterministic pretty-printed JSON with format_number for every double.
std::string dump(const Json& j);

Json to_json(const BoundSet& b);
Json to_json(const TrialReport& r);
Json to_json(const CampaignReport& r);
Json to_json(const ProbeResult& r);
Json to_json(const EstimationReport& r);

BoundSet bound_set_from_json(const Json& j);
TrialReport trial_report_from_json(const Json& j);
CampaignReport campaign_from_json(const Json& j);
ProbeResult probe_from_json(const Json& j);
EstimationReport estimation_from_json(const Json& j);

/// Minimal CSV table: header plus rows of preformatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t);
Table campaign_table(const CampaignReport& r);

}  // namespace renyi_reach::io
