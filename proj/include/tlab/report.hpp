#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace tlab {

// Round-trippable decimal form, '.' separator regardless of locale.
std::string fmt_double(double x);

// Echoed into every output so a result file names the run that made it.
// Timing never goes here: reruns of one seed must be byte-identical.
struct ReportHeader {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params; // echoed in order
    std::uint64_t seed = 0;
};

std::string csv_document(const ReportHeader& h, const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows);

std::string json_document(const ReportHeader& h, const nlohmann::ordered_json& results);

// Writes via a temp file in the same directory plus rename, so readers
// never observe a half-written file.
void atomic_write_file(const std::string& path, const std::string& content);

} // namespace tlab
