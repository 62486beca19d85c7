#ifndef QPAN_SOLVER_HPP
#define QPAN_SOLVER_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <vector>

#include "qpan/errors.hpp"
#include "qpan/params.hpp"
#include "qpan/series.hpp"

namespace qpan {

/// @brief Coefficients with magnitude below this are flushed to exact zero,
///        so structural zeros stay zeros instead of denormal noise.
inline constexpr double kUnderflowFlush = 1e-300;

/**
 * @brief Which unknown the stored coefficients expand.
 *
 * `direct` is the equation's own unknown f. `normalized` is g = B f, the
 * substitution that makes the quadratic coefficient 1; the Laurent
 * constructions work in that variable because their leading coefficient is
 * then the parameter-free -1.
 */
enum class SeriesVariable { direct, normalized };

/**
 * @brief A truncated expansion of one local solution.
 *
 * `radius` is a conservative evaluation radius (see estimate_radius);
 * callers may override it when they know better. `formal` marks expansions
 * produced by coefficient rules without a convergence statement; formal
 * expansions refuse pointwise evaluation and continuation.
 */
template <std::floating_point T = double>
struct SolutionSeries {
    TruncatedSeries<T> series;
    SeriesVariable variable = SeriesVariable::direct;
    bool formal = false;
    T radius = std::numeric_limits<T>::infinity();
};

namespace detail {

template <std::floating_point T>
std::complex<T> flush_tiny(std::complex<T> c) {
    return std::abs(c) < static_cast<T>(kUnderflowFlush) ? std::complex<T>{} : c;
}

} // namespace detail

/**
 * @brief Root-test evaluation radius from the tail of a coefficient list.
 *
 * Takes inv_rho = max |a_n|^{1/n} over the last `window` indices with
 * n >= 1 and returns 0.5 / inv_rho. A window of exact zeros means the
 * expansion terminates within reach: radius +infinity.
 */
template <std::floating_point T>
T estimate_radius(const TruncatedSeries<T>& s, int window = 16) {
    int hi = s.order();
    int lo = std::max(1, hi - window + 1);
    T inv_rho = 0;
    for (int n = lo; n <= hi; ++n) {
        T m = std::abs(s.coeff(n));
        if (m > 0)
            inv_rho = std::max(inv_rho, std::exp(std::log(m) / T(n)));
    }
    if (inv_rho == T(0)) return std::numeric_limits<T>::infinity();
    return T(0.5) / inv_rho;
}

/**
 * @brief Power-series solution around the origin with value f0 there.
 *
 * Matching coefficients of z^n in f' = A f(qz) + B f^2 + C f + D gives
 *   (n+1) f_{n+1} = A q^n f_n + B * sum_{i+j=n} f_i f_j + C f_n + D*[n=0],
 * one clean triangular pass. Works for any B (B = 0 reduces to the linear
 * recurrence). Every solution of the equation that is regular at 0 arises
 * from exactly one value of f0, so this function *is* the solution family;
 * enumerate_family maps it over a seed list.
 */
template <std::floating_point T>
SolutionSeries<T> solve_entire(const EquationParams<T>& p, std::complex<T> f0,
                               int N = 128) {
    using complex = std::complex<T>;
    p.validate();
    if (N < 0) throw validation_error("truncation order must be >= 0");
    if (!(std::isfinite(f0.real()) && std::isfinite(f0.imag())))
        throw validation_error("initial value must be finite");

    std::vector<complex> a(static_cast<std::size_t>(N) + 1);
    a[0] = detail::flush_tiny(f0);
    complex qn{T(1)}; // q^n while filling a_{n+1}
    for (int n = 0; n < N; ++n) {
        complex conv{};
        for (int i = 0; i <= n; ++i) conv += a[i] * a[n - i];
        complex rhs = p.A * qn * a[n] + p.B * conv + p.C * a[n];
        if (n == 0) rhs += p.D;
        a[n + 1] = detail::flush_tiny(rhs / T(n + 1));
        if (!(std::isfinite(a[n + 1].real()) && std::isfinite(a[n + 1].imag())))
            throw numerical_error("series coefficients overflowed");
        qn *= p.q;
    }
    TruncatedSeries<T> s(complex{}, 0, std::move(a));
    T radius = estimate_radius(s);
    return SolutionSeries<T>{std::move(s), SeriesVariable::direct, false, radius};
}

/**
 * @brief Power-series solution of the linear equation (B = 0).
 *
 * Same family as solve_entire but insists the quadratic term is absent, so
 * callers probing linear-only behavior (radius dichotomy, constant mode)
 * state that intent and get an error instead of silent quadratic feedback.
 */
template <std::floating_point T>
SolutionSeries<T> solve_linear(const EquationParams<T>& p, std::complex<T> f0,
                               int N = 128) {
    if (!p.linear())
        throw validation_error("solve_linear requires B = 0");
    return solve_entire(p, f0, N);
}

/**
 * @brief The constant solution of the linear equation: c = -D / (A + C).
 * @throws validation_error when B != 0, or when A + C = 0 (then no constant
 *         solution exists for D != 0, and every constant works for D = 0;
 *         neither is a single value to return).
 */
template <std::floating_point T>
std::complex<T> linear_constant_solution(const EquationParams<T>& p) {
    p.validate();
    if (!p.linear())
        throw validation_error("constant mode requires B = 0");
    if (p.A + p.C == std::complex<T>{})
        throw validation_error(
            "constant mode is degenerate when A + C = 0: no single constant solution");
    return -p.D / (p.A + p.C);
}

/// @brief Map solve_entire over a list of initial values.
template <std::floating_point T>
std::vector<SolutionSeries<T>> enumerate_family(const EquationParams<T>& p,
                                                const std::vector<std::complex<T>>& seeds,
                                                int N = 128) {
    std::vector<SolutionSeries<T>> out;
    out.reserve(seeds.size());
    for (const auto& f0 : seeds) out.push_back(solve_entire(p, f0, N));
    return out;
}

/**
 * @brief The distinguished solution vanishing at the origin.
 *
 * When D != 0 the value f(0) = 0 pins the expansion completely (first
 * coefficient D, everything above forced), which is the one solution the
 * family does not parametrize freely. Coefficientwise identical to
 * solve_entire(p, 0, N); exists as its own entry point so the uniqueness
 * claim has a named, testable witness.
 */
template <std::floating_point T>
SolutionSeries<T> check_forced_uniqueness(const EquationParams<T>& p, int N = 128) {
    p.validate();
    p.require_q_not_minus_one();
    if (p.D == std::complex<T>{})
        throw validation_error("forced solution requires D != 0");
    return solve_entire(p, std::complex<T>{}, N);
}

/**
 * @brief Simple-pole Laurent solution at the origin, in the normalized
 *        variable g = B f.
 *
 * Writing g = -1/z + sum_{n>=0} b_n z^n into g' = A g(qz) + g^2 + C g + BD
 * and matching powers forces everything:
 *   z^-2: automatic,
 *   z^-1: b_0 = -(A/q + C) / 2,
 *   z^0 : 3 b_1 = A b_0 + b_0^2 + C b_0 + B D,
 *   z^n : (n+3) b_{n+1} = A q^n b_n + sum_{i+j=n, i,j>=0} b_i b_j + C b_n.
 * No free parameter: the pole normalization fixes the whole tail. The
 * expansion is a genuine local solution on a punctured disc.
 */
template <std::floating_point T>
SolutionSeries<T> solve_laurent_origin(const EquationParams<T>& p, int N = 128) {
    using complex = std::complex<T>;
    p.validate();
    p.require_q_not_minus_one();
    if (p.linear())
        throw validation_error("pole expansions require a nonzero quadratic coefficient");
    if (N < 0) throw validation_error("truncation order must be >= 0");

    std::vector<complex> b(static_cast<std::size_t>(N) + 2); // b[-1+1+n] = b_n
    auto at = [&b](int n) -> complex& { return b[static_cast<std::size_t>(n + 1)]; };
    at(-1) = complex{T(-1)};
    at(0) = detail::flush_tiny(-(p.A / p.q + p.C) / T(2));
    if (N >= 1) {
        complex b0 = at(0);
        at(1) = detail::flush_tiny(
            (p.A * b0 + b0 * b0 + p.C * b0 + p.B * p.D) / T(3));
    }
    complex qn = p.q; // q^n while filling b_{n+1}
    for (int n = 1; n < N; ++n) {
        complex conv{};
        for (int i = 0; i <= n; ++i) conv += at(i) * at(n - i);
        at(n + 1) = detail::flush_tiny(
            (p.A * qn * at(n) + conv + p.C * at(n)) / T(n + 3));
        qn *= p.q;
    }
    TruncatedSeries<T> s(complex{}, -1, std::move(b));
    T radius = estimate_radius(s);
    return SolutionSeries<T>{std::move(s), SeriesVariable::normalized, false, radius};
}

/**
 * @brief Formal simple-pole expansion at a nonzero center z0, normalized
 *        variable, free constant term b0.
 *
 * Away from the origin the rescaled argument q*z leaves the expansion disc,
 * so coefficient matching does not close; the local rules still propagate a
 * tail from b0:
 *   b_{-1} = -1,  b_0 = caller's seed,
 *   3 b_1 = A b_0 + b_0^2 + C b_0   (the n = 0 instance of the step rule),
 *   (n+3) b_{n+1} = A q^n b_n + sum_{i+j=n, i,j>=0} b_i b_j + C b_n.
 * The result is marked formal: coefficient inspection only, never
 * evaluation or continuation. b0 = 0 kills the entire tail, reproducing the
 * bare pole -1/(z - z0); b0 = -(A + C) does the same, which in the direct
 * variable is the closed form -1/(B(z - z0)) + s0.
 */
template <std::floating_point T>
SolutionSeries<T> solve_laurent_at(const EquationParams<T>& p, std::complex<T> z0,
                                   std::complex<T> b0, int N = 128) {
    using complex = std::complex<T>;
    p.validate();
    p.require_q_not_minus_one();
    if (p.linear())
        throw validation_error("pole expansions require a nonzero quadratic coefficient");
    if (z0 == complex{})
        throw validation_error("use the origin construction for center 0");
    if (!(std::isfinite(z0.real()) && std::isfinite(z0.imag())) ||
        !(std::isfinite(b0.real()) && std::isfinite(b0.imag())))
        throw validation_error("center and seed must be finite");
    if (N < 0) throw validation_error("truncation order must be >= 0");

    std::vector<complex> b(static_cast<std::size_t>(N) + 2);
    auto at = [&b](int n) -> complex& { return b[static_cast<std::size_t>(n + 1)]; };
    at(-1) = complex{T(-1)};
    at(0) = detail::flush_tiny(b0);
    if (N >= 1)
        at(1) = detail::flush_tiny((p.A * at(0) + at(0) * at(0) + p.C * at(0)) / T(3));
    complex qn = p.q;
    for (int n = 1; n < N; ++n) {
        complex conv{};
        for (int i = 0; i <= n; ++i) conv += at(i) * at(n - i);
        at(n + 1) = detail::flush_tiny(
            (p.A * qn * at(n) + conv + p.C * at(n)) / T(n + 3));
        qn *= p.q;
    }
    TruncatedSeries<T> s(z0, -1, std::move(b));
    return SolutionSeries<T>{std::move(s), SeriesVariable::normalized, true, T(0)};
}

/// @brief Rescale a direct-variable solution to the normalized variable
///        g = B f (coefficientwise multiplication by B). Requires B != 0.
template <std::floating_point T>
SolutionSeries<T> to_normalized_view(const SolutionSeries<T>& sol,
                                     const EquationParams<T>& p) {
    if (sol.variable == SeriesVariable::normalized) return sol;
    if (p.linear())
        throw validation_error("normalized view requires B != 0");
    std::vector<std::complex<T>> c;
    c.reserve(static_cast<std::size_t>(sol.series.order() - sol.series.low()) + 1);
    for (int n = sol.series.low(); n <= sol.series.order(); ++n)
        c.push_back(p.B * sol.series.coeff(n));
    TruncatedSeries<T> s(sol.series.center(), sol.series.low(), std::move(c));
    return SolutionSeries<T>{std::move(s), SeriesVariable::normalized, sol.formal,
                             sol.radius};
}

/// @brief Inverse of to_normalized_view: f = g / B.
template <std::floating_point T>
SolutionSeries<T> to_direct_view(const SolutionSeries<T>& sol,
                                 const EquationParams<T>& p) {
    if (sol.variable == SeriesVariable::direct) return sol;
    if (p.linear())
        throw validation_error("direct view requires B != 0");
    std::vector<std::complex<T>> c;
    c.reserve(static_cast<std::size_t>(sol.series.order() - sol.series.low()) + 1);
    for (int n = sol.series.low(); n <= sol.series.order(); ++n)
        c.push_back(sol.series.coeff(n) / p.B);
    TruncatedSeries<T> s(sol.series.center(), sol.series.low(), std::move(c));
    return SolutionSeries<T>{std::move(s), SeriesVariable::direct, sol.formal,
                             sol.radius};
}

/**
 * @brief Pointwise defect of a truncated solution in the equation it
 *        expands: f'(z) - A f(qz) - B f(z)^2 - C f(z) - D, or the
 *        normalized-variable analog with quadratic coefficient 1 and
 *        constant term B*D.
 *
 * Every factor is evaluated by Horner from the stored coefficients, so this
 * measures the expansion against the equation itself, not against the
 * series arithmetic that produced it.
 * @throws formal_series_error for formal expansions.
 */
template <std::floating_point T>
std::complex<T> ode_residual(const EquationParams<T>& p,
                             const SolutionSeries<T>& sol, std::complex<T> z) {
    using complex = std::complex<T>;
    if (sol.formal)
        throw formal_series_error("formal expansions cannot be evaluated");
    TruncatedSeries<T> d = differentiate(sol.series);
    complex fz = evaluate(sol.series, z);
    complex fqz = evaluate(sol.series, p.q * z);
    complex dz = evaluate(d, z);
    if (sol.variable == SeriesVariable::direct)
        return dz - p.A * fqz - p.B * fz * fz - p.C * fz - p.D;
    return dz - p.A * fqz - fz * fz - p.C * fz - p.B * p.D;
}

/**
 * @brief Root-test growth estimate |a_n|^{1/n} for the linear equation,
 *        computed in log space.
 *
 * The linear recurrence multiplies by (A q^n + C)/(n+1) each step; for
 * |q| > 1 the stored coefficients overflow double well before n = 60 and
 * for |q| < 1 they underflow, so the estimate is accumulated as
 * log|a_n| = log|a_1| + sum log|A q^k + C| - log(k+1), which is exact for
 * B = 0. Returns exp(log|a_n| / n); an exactly-zero coefficient along the
 * way returns 0 (the expansion terminates).
 */
template <std::floating_point T>
T linear_root_test_estimate(const EquationParams<T>& p, std::complex<T> a0, int n) {
    p.validate();
    if (!p.linear())
        throw validation_error("log-space root test requires B = 0");
    if (n < 1) throw validation_error("root test index must be >= 1");
    std::complex<T> a1 = (p.A + p.C) * a0 + p.D;
    if (a1 == std::complex<T>{}) return T(0);
    T log_mag = std::log(std::abs(a1));
    std::complex<T> qk = p.q; // q^k while stepping a_{k+1} -> a_{k+2}
    for (int k = 1; k < n; ++k) {
        std::complex<T> factor = p.A * qk + p.C;
        if (factor == std::complex<T>{}) return T(0);
        log_mag += std::log(std::abs(factor)) - std::log(T(k + 1));
        qk *= p.q;
    }
    return std::exp(log_mag / T(n));
}

} // namespace qpan

#endif // QPAN_SOLVER_HPP
