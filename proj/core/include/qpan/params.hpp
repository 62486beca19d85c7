#ifndef QPAN_PARAMS_HPP
#define QPAN_PARAMS_HPP

#include <cmath>
#include <complex>
#include <concepts>

#include "qpan/errors.hpp"

namespace qpan {

/**
 * @brief Coefficients of the pantograph-Riccati equation
 *        f'(z) = A f(qz) + B f(z)^2 + C f(z) + D.
 *
 * All coefficients are complex constants. A = 0 or q in {0, 1} degenerate
 * the equation (no rescaled argument, or a plain ODE) and are rejected by
 * validate(). Some constructions additionally reject q = -1; those call
 * require_q_not_minus_one() themselves.
 *
 * @tparam T real scalar type (double or long double).
 */
template <std::floating_point T = double>
struct EquationParams {
    using complex = std::complex<T>;

    complex A{};
    complex B{};
    complex C{};
    complex D{};
    complex q{};

    /// @brief True when the quadratic term is absent (B = 0).
    bool linear() const { return B == complex{}; }

    /// @brief |q| < 1: argument rescaling contracts toward the origin.
    bool contracting() const { return std::abs(q) < T(1); }

    /**
     * @brief Check the global parameter domain.
     * @throws validation_error when A = 0, q = 0, q = 1, or any
     *         coefficient is non-finite.
     */
    void validate() const {
        auto finite = [](complex c) {
            return std::isfinite(c.real()) && std::isfinite(c.imag());
        };
        if (!finite(A) || !finite(B) || !finite(C) || !finite(D) || !finite(q))
            throw validation_error("equation parameters must be finite");
        if (A == complex{})
            throw validation_error("coefficient A must be nonzero");
        if (q == complex{})
            throw validation_error("rescaling factor q must be nonzero");
        if (q == complex{T(1)})
            throw validation_error("rescaling factor q must not equal 1");
    }

    /// @throws validation_error when q = -1 (two-cycle degeneracy).
    void require_q_not_minus_one() const {
        if (q == complex{T(-1)})
            throw validation_error("rescaling factor q must not equal -1");
    }

    /**
     * @brief Parameters of the normalized equation satisfied by g = B f.
     *
     * Substituting f = g / B turns the equation into
     * g' = A g(qz) + g^2 + C g + B D, i.e. quadratic coefficient 1 and
     * constant term B*D. Requires B != 0.
     */
    EquationParams normalized() const {
        if (linear())
            throw validation_error(
                "normalized form requires a nonzero quadratic coefficient");
        return EquationParams{A, complex{T(1)}, C, B * D, q};
    }
};

} // namespace qpan

#endif // QPAN_PARAMS_HPP
