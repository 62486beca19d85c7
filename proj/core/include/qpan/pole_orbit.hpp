#ifndef QPAN_POLE_ORBIT_HPP
#define QPAN_POLE_ORBIT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <vector>

#include "qpan/errors.hpp"

namespace qpan {

/// Hard cap on the number of steps a single orbit trace may request.
inline constexpr int kMaxOrbitSteps = 64;

/// Largest numerator or denominator degree accepted for the right-hand side.
inline constexpr int kMaxRhsDegree = 8;

/// @brief Degrees of the rational expression P/Q that drives the pole
/// calculus, with P/Q assumed irreducible.
struct RHSDegrees {
    int p{0};  ///< numerator degree, 0 <= p <= kMaxRhsDegree
    int s{0};  ///< denominator degree, 0 <= s <= kMaxRhsDegree

    /// @brief Geometric order multiplier p - s of a single propagation step.
    [[nodiscard]] int multiplier() const noexcept { return p - s; }
};

/// @brief Nature of the seed singularity an orbit starts from.
enum class OrbitStartKind {
    pole,              ///< the solution itself has a pole of order t at the seed
    denominator_zero,  ///< the denominator factor Q vanishes to order t at the seed
};

/// @brief Conclusion drawn from a propagated order sequence.
enum class OrbitVerdict {
    accumulates_at_origin,  ///< contracted orbit drags unbounded orders to 0
    forces_positive_order,  ///< expanding orbit forces positive growth order
    benign,                 ///< no obstruction follows from the orbit alone
};

/// @brief Stable text labels for verdicts, as emitted in reports.
[[nodiscard]] constexpr const char* orbit_verdict_name(OrbitVerdict v) noexcept {
    switch (v) {
        case OrbitVerdict::accumulates_at_origin:
            return "accumulates-at-origin";
        case OrbitVerdict::forces_positive_order:
            return "forces-positive-order";
        case OrbitVerdict::benign:
            return "benign";
    }
    return "benign";
}

/// @brief Stable text labels for seed kinds, as used in configs and reports.
[[nodiscard]] constexpr const char* orbit_kind_name(OrbitStartKind k) noexcept {
    return k == OrbitStartKind::pole ? "pole" : "denominator-zero";
}

namespace detail {

inline void check_orbit_inputs(const RHSDegrees& d, OrbitStartKind kind,
                               long long t, int n_steps) {
    if (d.p < 0 || d.p > kMaxRhsDegree || d.s < 0 || d.s > kMaxRhsDegree)
        throw validation_error("right-hand side degrees must lie in [0, 8]");
    if (t < 1)
        throw validation_error("seed order must be a positive integer");
    if (n_steps < 0)
        throw validation_error("step count must be nonnegative");
    if (n_steps > kMaxOrbitSteps)
        throw validation_error("orbit length is capped at 64 steps");
    if (kind == OrbitStartKind::denominator_zero && d.s < 1)
        throw validation_error(
            "a denominator zero requires denominator degree at least 1");
}

template <std::floating_point T>
void check_orbit_dilation(const std::complex<T>& q) {
    if (!std::isfinite(q.real()) || !std::isfinite(q.imag()) ||
        q == std::complex<T>{})
        throw validation_error("dilation parameter must be finite and nonzero");
}

}  // namespace detail

/// @brief Tells whether a seed launches a pole chain at all.
///
/// A pole only feeds back through the right-hand side when the numerator
/// degree exceeds the denominator degree; otherwise the rational expression
/// stays bounded there and nothing propagates. A denominator zero always
/// creates a pole one step later.
[[nodiscard]] inline bool orbit_propagates(const RHSDegrees& d,
                                           OrbitStartKind kind) noexcept {
    return kind == OrbitStartKind::denominator_zero || d.p > d.s;
}

/// @brief Iterates the single-step pole-order rule along the orbit.
///
/// From a pole of order o the next order is max(o + 1, (p - s) * o); a
/// denominator zero of order t creates a pole of order t on the first step
/// and follows the pole rule afterwards, which for p <= s + 1 degenerates to
/// the additive chain o -> o + 1. Returns one entry per step: the predicted
/// order at q^k z0 for k = 1..n_steps. A non-propagating seed yields an
/// empty sequence, and the sequence stops early if the next order would
/// exceed the 64-bit integer range. Predictions hold at generic orbit
/// points: iterated coefficients are assumed to neither vanish nor blow up
/// there; that assumption is recorded, not checked.
///
/// @throws validation_error on degrees outside [0, 8], t < 1, a negative or
/// over-cap step count, or a denominator-zero seed with s = 0.
[[nodiscard]] inline std::vector<long long> propagate_order(
    const RHSDegrees& d, OrbitStartKind kind, long long t, int n_steps) {
    detail::check_orbit_inputs(d, kind, t, n_steps);
    std::vector<long long> orders;
    if (!orbit_propagates(d, kind)) return orders;
    orders.reserve(static_cast<std::size_t>(n_steps));
    constexpr long long cap = std::numeric_limits<long long>::max();
    const long long m = d.multiplier();
    long long o = t;
    bool have_pole = kind == OrbitStartKind::pole;
    for (int k = 0; k < n_steps; ++k) {
        long long next;
        if (!have_pole) {
            next = t;
            have_pole = true;
        } else {
            if (m >= 1 && o > cap / m) break;
            if (o == cap) break;
            next = std::max(o + 1, m >= 1 ? m * o : 0);
        }
        orders.push_back(next);
        o = next;
    }
    return orders;
}

/// @brief Exponent-of-convergence lower bound log(m)/log|q| extracted from a
/// geometric pole chain with order multiplier m.
///
/// The bound is monotone increasing in m and decreasing in |q|.
///
/// @throws validation_error if m < 2 or q is not finite with |q| > 1.
template <std::floating_point T>
[[nodiscard]] T growth_lower_bound(long long m, const std::complex<T>& q) {
    if (m < 2)
        throw validation_error(
            "growth bound requires an order multiplier of at least 2");
    if (!std::isfinite(q.real()) || !std::isfinite(q.imag()))
        throw validation_error("dilation parameter must be finite and nonzero");
    const T aq = std::abs(q);
    if (!(aq > T(1)))
        throw validation_error("growth bound requires |q| > 1");
    return std::log(static_cast<T>(m)) / std::log(aq);
}

/// @brief Overload taking the degrees directly; the multiplier is p - s.
template <std::floating_point T>
[[nodiscard]] T growth_lower_bound(const RHSDegrees& d,
                                   const std::complex<T>& q) {
    if (d.p < 0 || d.p > kMaxRhsDegree || d.s < 0 || d.s > kMaxRhsDegree)
        throw validation_error("right-hand side degrees must lie in [0, 8]");
    return growth_lower_bound(static_cast<long long>(d.multiplier()), q);
}

/// @brief Classifies what the propagated orders imply about the solution.
///
/// A contracted orbit (|q| < 1) with a propagating seed drags poles of ever
/// higher order toward the origin, so no function meromorphic at 0 can
/// follow the chain. An expanding orbit (|q| > 1) with order multiplier at
/// least 2 forces a positive growth order, bounded below by
/// growth_lower_bound. Everything else, including |q| = 1 exactly, is
/// benign.
///
/// @throws validation_error on inputs rejected by propagate_order or a
/// non-finite or zero dilation parameter.
template <std::floating_point T>
[[nodiscard]] OrbitVerdict meromorphy_verdict(const RHSDegrees& d,
                                              OrbitStartKind kind, long long t,
                                              const std::complex<T>& q) {
    detail::check_orbit_inputs(d, kind, t, 0);
    detail::check_orbit_dilation(q);
    if (!orbit_propagates(d, kind)) return OrbitVerdict::benign;
    const T aq = std::abs(q);
    if (aq < T(1)) return OrbitVerdict::accumulates_at_origin;
    if (aq > T(1) && d.multiplier() >= 2)
        return OrbitVerdict::forces_positive_order;
    return OrbitVerdict::benign;
}

/// @brief One propagated orbit entry: the point q^k z0 and the predicted
/// pole order there.
template <std::floating_point T>
struct OrbitStep {
    std::complex<T> point;
    long long order{};
};

/// @brief Full orbit record: the seed, every propagated step and the drawn
/// verdict.
///
/// Orders are generic-point predictions; assumes_generic_points records that
/// standing assumption in the output itself.
template <std::floating_point T>
struct PoleOrbit {
    std::complex<T> start;
    OrbitStartKind kind{OrbitStartKind::pole};
    long long start_order{1};
    std::vector<OrbitStep<T>> steps;
    OrbitVerdict verdict{OrbitVerdict::benign};
    bool assumes_generic_points{true};
};

/// @brief Runs the order propagation along the concrete orbit z0, q z0,
/// q^2 z0, ... and bundles points, orders and verdict.
///
/// The trace may hold fewer than n_steps entries when the order sequence
/// saturates the integer range, and is empty for a non-propagating seed.
/// Order predictions are meaningful when |q| != 1, where the orbit never
/// revisits a point; with |q| = 1 the mechanical trace is still returned and
/// the verdict is benign.
///
/// @throws validation_error on inputs rejected by propagate_order, a zero or
/// non-finite seed point, or a zero or non-finite dilation parameter.
template <std::floating_point T>
[[nodiscard]] PoleOrbit<T> trace_orbit(const RHSDegrees& d, OrbitStartKind kind,
                                       long long t, const std::complex<T>& z0,
                                       const std::complex<T>& q, int n_steps) {
    if (!std::isfinite(z0.real()) || !std::isfinite(z0.imag()) ||
        z0 == std::complex<T>{})
        throw validation_error("orbit seed must be finite and nonzero");
    detail::check_orbit_dilation(q);
    const std::vector<long long> orders = propagate_order(d, kind, t, n_steps);
    PoleOrbit<T> orbit;
    orbit.start = z0;
    orbit.kind = kind;
    orbit.start_order = t;
    orbit.verdict = meromorphy_verdict(d, kind, t, q);
    orbit.steps.reserve(orders.size());
    std::complex<T> point = z0;
    for (long long order : orders) {
        point *= q;
        orbit.steps.push_back(OrbitStep<T>{point, order});
    }
    return orbit;
}

}  // namespace qpan

#endif
