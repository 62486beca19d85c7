#include "qpan/emit.hpp"

#include <cstdio>

namespace qpan {

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_real(long double x) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17Lg", x);
    return buf;
}

std::string format_complex(std::complex<double> z) {
    return "[" + format_real(z.real()) + ", " + format_real(z.imag()) + "]";
}

std::string format_complex(std::complex<long double> z) {
    return "[" + format_real(z.real()) + ", " + format_real(z.imag()) + "]";
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

std::string JsonWriter::str(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
    return out;
}

std::string JsonWriter::object(
    const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string out = "{";
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ", ";
        out += str(fields[i].first) + ": " + fields[i].second;
    }
    out += "}";
    return out;
}

std::string JsonWriter::array(const std::vector<std::string>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += values[i];
    }
    out += "]";
    return out;
}

} // namespace qpan
