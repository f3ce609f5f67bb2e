#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gicb/channel.hpp"
#include "gicb/rate_region.hpp"

namespace gicb::report {

inline constexpr const char* kToolVersion = "0.1.0";

/// 12 significant digits, '.' decimal separator, locale-independent.
std::string format_number(double v);

/// One CSV row from doubles, formatted with format_number.
std::string csv_row(const std::vector<double>& values);

/// Writes header + rows joined with '\n'; deterministic byte output for a
/// given input.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text(const std::string& path, const std::string& body);

/// Loads `{ "M": int, "H": [[..]], "P": [..], "noise": [..]? }`, applying
/// standard-form conversion when a noise vector or non-unit diagonal is
/// present. Throws InvalidChannelError / nlohmann::json exceptions on
/// malformed input.
InterferenceNetwork load_channel_file(const std::string& path);

nlohmann::json channel_json(const InterferenceNetwork& net);
nlohmann::json region_json(const RateRegion& region, int boundary_stride = 1);

/// The numeric tolerances a report was produced under.
nlohmann::json tolerances_json();

} // namespace gicb::report
