#ifndef QPAN_NEVANLINNA_HPP
#define QPAN_NEVANLINNA_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <utility>
#include <vector>

#include "qpan/errors.hpp"
#include "qpan/pole_orbit.hpp"
#include "qpan/rational.hpp"

namespace qpan {

/// Default number of uniform circle nodes for the proximity quadrature.
inline constexpr int kQuadratureNodes = 4096;

/// Nodes closer than this fraction of the radius to a listed pole are
/// excluded from the quadrature.
inline constexpr double kPoleExclusionRel = 1e-6;

/// @brief One row of a characteristic table: radius, proximity part m,
/// integrated counting part N and their sum T.
template <std::floating_point Real>
struct CharacteristicSample {
    Real r{};
    Real m{};
    Real N{};
    Real T{};
};

namespace detail {

template <std::floating_point T>
void check_radius(T r) {
    if (!std::isfinite(r) || !(r > T(0)))
        throw validation_error("radius must be positive and finite");
}

template <std::floating_point T>
void check_radius_grid(const std::vector<T>& grid) {
    if (grid.empty()) throw validation_error("radius grid is empty");
    T prev{};
    for (T r : grid) {
        check_radius(r);
        if (r <= prev)
            throw validation_error("radius grid must be strictly increasing");
        prev = r;
    }
}

template <std::floating_point T>
void check_dilation(const std::complex<T>& q) {
    if (!std::isfinite(q.real()) || !std::isfinite(q.imag()) ||
        q == std::complex<T>{})
        throw validation_error("dilation parameter must be finite and nonzero");
}

}  // namespace detail

/// @brief Proximity functional m(r): the mean of log+|f| over the circle of
/// radius r, by uniform (periodic trapezoid) quadrature.
///
/// Nodes within kPoleExclusionRel * r of a listed pole, and nodes where the
/// evaluation comes back non-finite, are excluded and the mean is taken over
/// the surviving nodes. Summation runs in fixed node order, so identical
/// inputs reproduce identical output bits.
///
/// @throws validation_error on a bad radius or fewer than 8 nodes.
/// @throws numerical_error when more than nodes/8 nodes are excluded, which
/// makes the renormalized quadrature unreliable.
template <std::floating_point T, typename F>
[[nodiscard]] T proximity(F&& f, T r, int nodes = kQuadratureNodes,
                          const std::vector<PolePoint<T>>& poles = {}) {
    detail::check_radius(r);
    if (nodes < 8)
        throw validation_error("quadrature needs at least 8 nodes");
    const T tau = T(2) * std::numbers::pi_v<T>;
    const T eps = T(kPoleExclusionRel) * r;
    T sum{};
    int included = 0;
    int excluded = 0;
    for (int k = 0; k < nodes; ++k) {
        const T theta = tau * T(k) / T(nodes);
        const std::complex<T> z = std::polar(r, theta);
        bool skip = false;
        for (const auto& pole : poles) {
            if (std::abs(z - pole.location) < eps) {
                skip = true;
                break;
            }
        }
        if (!skip) {
            const std::complex<T> w = f(z);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                skip = true;
            } else {
                const T a = std::abs(w);
                if (a > T(1)) sum += std::log(a);
                ++included;
            }
        }
        if (skip) ++excluded;
    }
    if (excluded > nodes / 8)
        throw numerical_error(
            "unreliable quadrature: too many circle nodes excluded");
    return sum / T(included);
}

/// @brief Integrated counting function N(r) for a finite pole list: the sum
/// of mult * log(r/|z_k|) over poles inside the closed disc, plus the
/// at-origin multiplicity times log r.
///
/// @throws validation_error on a bad radius or nonpositive multiplicity.
template <std::floating_point T>
[[nodiscard]] T counting(const std::vector<PolePoint<T>>& poles, T r) {
    detail::check_radius(r);
    T total{};
    for (const auto& pole : poles) {
        if (pole.multiplicity < 1)
            throw validation_error("pole multiplicities must be positive");
        const T az = std::abs(pole.location);
        if (az == T(0))
            total += T(pole.multiplicity) * std::log(r);
        else if (az <= r)
            total += T(pole.multiplicity) * std::log(r / az);
    }
    return total;
}

/// @brief Characteristic T(r) = m(r) + N(r) for an evaluator with a
/// caller-supplied pole list.
template <std::floating_point T, typename F>
[[nodiscard]] CharacteristicSample<T> characteristic(
    F&& f, const std::vector<PolePoint<T>>& poles, T r,
    int nodes = kQuadratureNodes) {
    CharacteristicSample<T> sample;
    sample.r = r;
    sample.m = proximity(f, r, nodes, poles);
    sample.N = counting(poles, r);
    sample.T = sample.m + sample.N;
    return sample;
}

/// @brief Characteristic of a rational function; the pole list is computed
/// from the denominator roots, so the input should be in reduced form.
template <std::floating_point T>
[[nodiscard]] CharacteristicSample<T> characteristic(
    const RationalFunction<T>& f, T r, int nodes = kQuadratureNodes) {
    const std::vector<PolePoint<T>> poles = rational_poles(f);
    return characteristic(
        [&f](std::complex<T> z) { return evaluate(f, z); }, poles, r, nodes);
}

/// @brief Characteristic samples of a rational function over an increasing
/// radius grid; one row per radius.
template <std::floating_point T>
[[nodiscard]] std::vector<CharacteristicSample<T>> characteristic_curve(
    const RationalFunction<T>& f, const std::vector<T>& r_grid,
    int nodes = kQuadratureNodes) {
    detail::check_radius_grid(r_grid);
    const std::vector<PolePoint<T>> poles = rational_poles(f);
    std::vector<CharacteristicSample<T>> rows;
    rows.reserve(r_grid.size());
    for (T r : r_grid)
        rows.push_back(characteristic(
            [&f](std::complex<T> z) { return evaluate(f, z); }, poles, r,
            nodes));
    return rows;
}

/// @brief Largest deviation |T(r, f(q.)) - T(|q| r, f)| over a radius grid.
///
/// The dilated function's poles are the original poles divided by q. The
/// identity behind the check says the two characteristics differ by a
/// bounded amount; the caller compares the returned maximum against its own
/// bound.
///
/// @throws validation_error on a bad grid or dilation parameter.
template <std::floating_point T, typename F>
[[nodiscard]] T verify_q_shift(F&& f, const std::vector<PolePoint<T>>& poles,
                               const std::complex<T>& q,
                               const std::vector<T>& r_grid,
                               int nodes = kQuadratureNodes) {
    detail::check_radius_grid(r_grid);
    detail::check_dilation(q);
    const T aq = std::abs(q);
    std::vector<PolePoint<T>> dilated_poles;
    dilated_poles.reserve(poles.size());
    for (const auto& pole : poles)
        dilated_poles.push_back(
            PolePoint<T>{pole.location / q, pole.multiplicity});
    auto dilated = [&f, q](std::complex<T> z) { return f(q * z); };
    T worst{};
    for (T r : r_grid) {
        const T lhs = characteristic(dilated, dilated_poles, r, nodes).T;
        const T rhs = characteristic(f, poles, aq * r, nodes).T;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

/// @brief Rational-function overload; poles come from the denominator roots.
template <std::floating_point T>
[[nodiscard]] T verify_q_shift(const RationalFunction<T>& f,
                               const std::complex<T>& q,
                               const std::vector<T>& r_grid,
                               int nodes = kQuadratureNodes) {
    const std::vector<PolePoint<T>> poles = rational_poles(f);
    return verify_q_shift(
        [&f](std::complex<T> z) { return evaluate(f, z); }, poles, q, r_grid,
        nodes);
}

/// @brief Largest deviation |T(r, 1/(f - a)) - T(r, f)| over a radius grid,
/// the quantity the first main theorem bounds by a constant.
///
/// @throws validation_error when f is identically a, or on a bad grid or
/// target value.
template <std::floating_point T>
[[nodiscard]] T verify_first_main(const RationalFunction<T>& f,
                                  const std::complex<T>& a,
                                  const std::vector<T>& r_grid,
                                  int nodes = kQuadratureNodes) {
    detail::check_radius_grid(r_grid);
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw validation_error("target value must be finite");
    const RationalFunction<T> shifted = subtract_constant(f, a);
    if (shifted.numerator().zero())
        throw validation_error(
            "the function is identically equal to the target value");
    const RationalFunction<T> inverted = reciprocal(shifted);
    const std::vector<PolePoint<T>> poles_f = rational_poles(f);
    const std::vector<PolePoint<T>> poles_inv = rational_poles(inverted);
    T worst{};
    for (T r : r_grid) {
        const T lhs =
            characteristic([&inverted](std::complex<T> z) {
                return evaluate(inverted, z);
            }, poles_inv, r, nodes).T;
        const T rhs = characteristic(
            [&f](std::complex<T> z) { return evaluate(f, z); }, poles_f, r,
            nodes).T;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

/// @brief Ratio T(r, outer(f)) / T(r, f) at the largest grid radius, where
/// outer is a rational expression with constant coefficients applied to the
/// values of f.
///
/// For an irreducible composite the ratio tends to max(deg numerator,
/// deg denominator) of outer as r grows. The composition is formed
/// symbolically and checked for cancellation: a nontrivial common factor
/// means the degree bookkeeping would silently break, so it is rejected.
///
/// @throws validation_error on a bad grid, an identically-zero outer
/// numerator, outer degrees beyond 8, a cancelling composition, or a base
/// characteristic too small to divide by at the largest radius.
template <std::floating_point T>
[[nodiscard]] T verify_mokhonko(const RationalFunction<T>& f,
                                const RationalFunction<T>& outer,
                                const std::vector<T>& r_grid,
                                int nodes = kQuadratureNodes) {
    detail::check_radius_grid(r_grid);
    if (outer.numerator().zero())
        throw validation_error(
            "composition numerator must not vanish identically");
    if (outer.numerator().degree() > kMaxRhsDegree ||
        outer.denominator().degree() > kMaxRhsDegree)
        throw validation_error("right-hand side degrees must lie in [0, 8]");
    const RationalFunction<T> composite = compose(outer, f);
    const Polynomial<T> shared =
        poly_gcd(composite.numerator(), composite.denominator());
    if (shared.degree() >= 1)
        throw validation_error(
            "degenerate composition: numerator and denominator cancel");
    const T r = r_grid.back();
    const T t_composite = characteristic(composite, r, nodes).T;
    const T t_base = characteristic(f, r, nodes).T;
    if (!(t_base > T(0)))
        throw validation_error(
            "base characteristic vanishes at the largest grid radius");
    return t_composite / t_base;
}

}  // namespace qpan

#endif
