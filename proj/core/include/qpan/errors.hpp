#ifndef QPAN_ERRORS_HPP
#define QPAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qpan {

/**
 * @brief Rejected input: a precondition on arguments or configuration failed.
 *
 * Raised before any numerical work starts (bad parameter domain, mixed
 * expansion centers, out-of-range truncation orders, malformed requests).
 * The command-line driver maps this type to exit code 2.
 */
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what)
        : std::invalid_argument(what) {}
};

/**
 * @brief A computation started but could not be completed reliably.
 *
 * Covers non-finite poisoning of coefficients, unreliable quadrature,
 * base points drifting too close to a known pole, and degenerate
 * compositions. Mapped to exit code 3 by the command-line driver.
 */
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what)
        : std::runtime_error(what) {}
};

/**
 * @brief Refusal to evaluate a formal (not-known-convergent) expansion.
 *
 * Expansions flagged formal support coefficient inspection and algebra but
 * never pointwise evaluation or analytic continuation. Mapped to exit
 * code 4 by the command-line driver.
 */
class formal_series_error : public std::runtime_error {
public:
    explicit formal_series_error(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace qpan

#endif // QPAN_ERRORS_HPP
