#ifndef QPAN_EMIT_HPP
#define QPAN_EMIT_HPP

#include <complex>
#include <string>
#include <vector>

namespace qpan {

/**
 * @brief Deterministic text formatting for numeric output.
 *
 * Every floating value crossing the tool boundary is printed with 17
 * significant digits via printf "%.17g", enough to round-trip an IEEE
 * double exactly, so identical runs produce identical bytes. The JSON
 * writer is deliberately hand-rolled: field order is fixed by construction
 * and numbers go through the same formatter.
 */
std::string format_real(double x);
std::string format_real(long double x);

/// @brief Complex value as a two-element array "[re, im]".
std::string format_complex(std::complex<double> z);
std::string format_complex(std::complex<long double> z);

/// @brief One CSV line from preformatted cells (no quoting; cells must not
///        contain commas or newlines).
std::string csv_line(const std::vector<std::string>& cells);

/**
 * @brief Minimal ordered JSON builder.
 *
 * Values are preformatted strings (use json_string / format_real /
 * format_complex); objects and arrays preserve insertion order.
 */
class JsonWriter {
public:
    /// @brief Escape and quote a string literal.
    static std::string str(const std::string& s);
    /// @brief Object from alternating key, preformatted-value pairs.
    static std::string object(const std::vector<std::pair<std::string, std::string>>& fields);
    static std::string array(const std::vector<std::string>& values);
};

} // namespace qpan

#endif // QPAN_EMIT_HPP
