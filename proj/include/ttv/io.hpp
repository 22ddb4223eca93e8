#ifndef TTV_IO_HPP
#define TTV_IO_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ttv/errors.hpp"

namespace ttv {

/// Formats a double with 15 significant digits, locale-independent, with
/// negative zero normalized away. All report numbers go through here so
/// byte-identical reruns hold.
inline std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // collapse -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

/// FNV-1a 64-bit content hash, reported as fixed-width hex.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string digest_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Deterministic JSON document: insertion-ordered objects, numbers rendered
// through format_number. nlohmann::json cannot pin the number formatting the
// byte-stable golden files need, so the envelope uses this small writer.
// ---------------------------------------------------------------------------

class JsonValue;
using JsonArray = std::vector<JsonValue>;
using JsonObject = std::vector<std::pair<std::string, JsonValue>>;

class JsonValue {
public:
    JsonValue() : v_(nullptr) {}
    JsonValue(std::nullptr_t) : v_(nullptr) {}
    JsonValue(bool b) : v_(b) {}
    JsonValue(double d) : v_(d) {}
    JsonValue(int i) : v_(static_cast<double>(i)) {}
    JsonValue(std::size_t i) : v_(static_cast<double>(i)) {}
    JsonValue(const char* s) : v_(std::string(s)) {}
    JsonValue(std::string s) : v_(std::move(s)) {}
    JsonValue(JsonArray a) : v_(std::move(a)) {}
    JsonValue(JsonObject o) : v_(std::move(o)) {}

    void dump(std::string& out) const {
        switch (v_.index()) {
            case 0:
                out += "null";
                break;
            case 1:
                out += std::get<bool>(v_) ? "true" : "false";
                break;
            case 2:
                out += format_number(std::get<double>(v_));
                break;
            case 3:
                escape(std::get<std::string>(v_), out);
                break;
            case 4: {
                out += '[';
                const auto& a = std::get<JsonArray>(v_);
                for (std::size_t i = 0; i < a.size(); ++i) {
                    if (i) out += ',';
                    a[i].dump(out);
                }
                out += ']';
                break;
            }
            case 5: {
                out += '{';
                const auto& o = std::get<JsonObject>(v_);
                for (std::size_t i = 0; i < o.size(); ++i) {
                    if (i) out += ',';
                    escape(o[i].first, out);
                    out += ':';
                    o[i].second.dump(out);
                }
                out += '}';
                break;
            }
        }
    }

    std::string dump() const {
        std::string out;
        dump(out);
        out += '\n';
        return out;
    }

private:
    static void escape(const std::string& s, std::string& out) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\r': out += "\\r"; break;
                case '\t': out += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    std::variant<std::nullptr_t, bool, double, std::string, JsonArray, JsonObject> v_;
};

// ---------------------------------------------------------------------------
// Sample ingestion
// ---------------------------------------------------------------------------

struct IngestResult {
    std::vector<double> values;
    std::vector<std::string> warnings;
    std::string digest;  // content hash of the raw file bytes
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

inline double parse_value(const std::string& token, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos != token.size()) fail(errc::parse_error, "trailing characters at line " +
                                                             std::to_string(line_no));
        if (!std::isfinite(v))
            fail(errc::parse_error, "non-finite value at line " + std::to_string(line_no));
        return v;
    } catch (const error&) {
        throw;
    } catch (const std::exception&) {
        fail(errc::parse_error, "cannot parse number at line " + std::to_string(line_no));
    }
}

} // namespace detail

/// Reads travel-time samples from a plain one-number-per-line file or a CSV
/// with a header row containing a "travel_time" column. Blank lines are
/// skipped and echoed in the warnings together with a count/min/max line.
/// Values must be finite and positive.
inline IngestResult ingest_samples(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::file_not_found, "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();

    IngestResult out;
    out.digest = digest_hex(fnv1a64(content));

    std::vector<std::string_view> lines;
    {
        std::size_t start = 0;
        for (std::size_t i = 0; i <= content.size(); ++i) {
            if (i == content.size() || content[i] == '\n') {
                std::string_view line(content.data() + start, i - start);
                if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
                lines.push_back(line);
                start = i + 1;
            }
        }
        if (!lines.empty() && lines.back().empty()) lines.pop_back();
    }
    if (lines.empty()) fail(errc::parse_error, "empty input file " + path);

    // header-addressed CSV when the first line has a travel_time column
    std::ptrdiff_t column = -1;
    std::size_t first_data_line = 0;
    if (lines[0].find(',') != std::string_view::npos ||
        detail::trim(lines[0]) == "travel_time") {
        const auto header = detail::split_csv(lines[0]);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == "travel_time") column = static_cast<std::ptrdiff_t>(i);
        }
        if (column < 0)
            fail(errc::parse_error, "CSV header has no travel_time column (line 1)");
        first_data_line = 1;
    }

    std::size_t skipped = 0;
    for (std::size_t i = first_data_line; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const std::string trimmed = detail::trim(lines[i]);
        if (trimmed.empty()) {
            ++skipped;
            continue;
        }
        std::string token = trimmed;
        if (column >= 0) {
            const auto cells = detail::split_csv(lines[i]);
            if (static_cast<std::size_t>(column) >= cells.size())
                fail(errc::parse_error, "missing travel_time cell at line " +
                                            std::to_string(line_no));
            token = cells[static_cast<std::size_t>(column)];
        }
        const double v = detail::parse_value(token, line_no);
        if (v <= 0.0)
            fail(errc::non_positive_sample,
                 "non-positive travel time at line " + std::to_string(line_no));
        out.values.push_back(v);
    }
    if (out.values.empty()) fail(errc::parse_error, "no samples in " + path);
    if (skipped > 0) {
        double lo = out.values[0], hi = out.values[0];
        for (double v : out.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        out.warnings.push_back("skipped " + std::to_string(skipped) +
                               " blank line(s); kept " + std::to_string(out.values.size()) +
                               " values in [" + format_number(lo) + ", " + format_number(hi) +
                               "]");
    }
    return out;
}

struct RouteSamples {
    std::string name;
    std::vector<double> values;
};

struct RoutesIngestResult {
    std::vector<RouteSamples> routes;
    std::string digest;
};

/// Multi-route CSV: a header row naming each route, one column per route.
/// Columns may have different lengths; blank cells are skipped.
inline RoutesIngestResult ingest_routes_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::file_not_found, "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();

    RoutesIngestResult out;
    out.digest = digest_hex(fnv1a64(content));

    std::istringstream lines(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_csv(line);
        if (out.routes.empty()) {
            for (const auto& name : cells) {
                if (name.empty())
                    fail(errc::parse_error, "empty route name in header (line 1)");
                out.routes.push_back({name, {}});
            }
            continue;
        }
        if (cells.size() > out.routes.size())
            fail(errc::parse_error, "row wider than header at line " + std::to_string(line_no));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].empty()) continue;
            const double v = detail::parse_value(cells[i], line_no);
            if (v <= 0.0)
                fail(errc::non_positive_sample,
                     "non-positive travel time at line " + std::to_string(line_no));
            out.routes[i].values.push_back(v);
        }
    }
    if (out.routes.size() < 2)
        fail(errc::parse_error, "multi-route CSV needs at least two columns: " + path);
    for (const auto& r : out.routes) {
        if (r.values.size() < 2)
            fail(errc::too_few_samples, "route " + r.name + " has fewer than 2 samples");
    }
    return out;
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(errc::io_error, "short write to " + path.string());
}

} // namespace ttv

#endif // TTV_IO_HPP
