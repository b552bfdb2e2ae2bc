#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rareweak/errors.hpp"

// Input and output plumbing for the command-line front end: numeric
// column reader, RFC-4180 CSV writing, and the 6-significant-digit
// number format used in all documents unless full precision is asked
// for. snprintf with the C locale keeps the decimal point fixed.

namespace rareweak {

// One value per line; blank lines and lines starting with '#' ignored.
inline std::vector<double> read_values(std::istream& in) {
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        if (line[begin] == '#') continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(begin, end - begin + 1);
        char* tail = nullptr;
        const double v = std::strtod(token.c_str(), &tail);
        if (tail == token.c_str() || *tail != '\0')
            throw OutOfDomainError("input: not a number: '" + token + "'");
        values.push_back(v);
    }
    return values;
}

// "inf"/"-inf"/"nan" for specials; otherwise %g with 6 significant
// digits, or 17 when full precision is requested.
inline std::string format_number(double x, bool full_precision = false) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", full_precision ? 17 : 6, x);
    return buf;
}

// Nearest double to the 6-significant-digit decimal rendering; JSON
// documents carry these so that both formats agree on printed values.
inline double round_sig6(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return std::strtod(buf, nullptr);
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& out) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << csv_quote(header[i]);
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << csv_quote(row[i]);
            out << '\n';
        }
    }
};

}  // namespace rareweak
