#include "tlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tlab/stats.hpp"
#include "tlab/version.hpp"

namespace tlab {

Interval wilson95(std::int64_t successes, std::int64_t trials) {
    if (trials < 0 || successes < 0 || successes > trials)
        throw std::invalid_argument("wilson95: need 0 <= successes <= trials");
    if (trials == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054; // 97.5% normal quantile
    double t = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / t;
    double z2 = z * z;
    double denom = 1.0 + z2 / t;
    double center = (phat + z2 / (2.0 * t)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
    // Exact Wilson bounds bracket phat; clamp away rounding residue so the
    // interval always contains the point estimate (exactly 0 or 1 included).
    double lo = std::min(std::max(0.0, center - half), phat);
    double hi = std::max(std::min(1.0, center + half), phat);
    return {lo, hi};
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string csv_document(const ReportHeader& h, const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    out << "# tool = " << kToolName << ' ' << kToolVersion << '\n';
    out << "# command = " << h.command << '\n';
    for (const auto& [key, value] : h.params) out << "# " << key << " = " << value << '\n';
    out << "# seed = " << h.seed << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ',';
        out << columns[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::logic_error("csv_document: row arity does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string json_document(const ReportHeader& h, const nlohmann::ordered_json& results) {
    nlohmann::ordered_json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = h.command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : h.params) params[key] = value;
    doc["params"] = params;
    doc["seed"] = h.seed;
    doc["results"] = results;
    return doc.dump(2) + "\n";
}

void atomic_write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed: " + path);
    }
}

} // namespace tlab
