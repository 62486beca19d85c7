#ifndef QPAN_CONTINUATION_HPP
#define QPAN_CONTINUATION_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <vector>

#include "qpan/errors.hpp"
#include "qpan/jets.hpp"
#include "qpan/params.hpp"
#include "qpan/solver.hpp"

namespace qpan {

/// @brief Most rescaling steps a single continuation request may chain.
inline constexpr int kMaxContinuationSteps = 16;

/**
 * @brief Tuning knobs for the continuation walkers.
 *
 * known_poles arms the proximity guard: any base point that comes within
 * eps_pole_rel * |point| of a listed pole aborts with a numerical error
 * instead of walking through garbage. Orbit predictions are a natural
 * source for this list.
 */
template <std::floating_point T = double>
struct ContinuationOptions {
    int micro_steps = 8;
    T eps_pole_rel = static_cast<T>(1e-6);
    std::vector<std::complex<T>> known_poles{};
};

/// @brief Radius reachable from a base disc of radius r0 after k rescaling
///        steps: each step scales the usable modulus by 1/|q| when |q| < 1
///        (outward) and by |q| when |q| > 1.
template <std::floating_point T>
T continued_radius(T r0, std::complex<T> q, int k) {
    T aq = std::abs(q);
    if (aq == T(1))
        throw validation_error("continuation requires |q| != 1");
    T scale = aq < T(1) ? T(1) / aq : aq;
    for (int i = 0; i < k; ++i) r0 *= scale;
    return r0;
}

namespace detail {

template <std::floating_point T>
void check_pole_distance(const ContinuationOptions<T>& opts, std::complex<T> w) {
    for (const auto& pole : opts.known_poles)
        if (std::abs(w - pole) < opts.eps_pole_rel * std::abs(w))
            throw numerical_error("continuation base point is too close to a known pole");
}

// One derivative ladder of the equation itself:
//   f^(n+1)(z) = B sum_k C(n,k) f^(k)(z) f^(n-k)(z) + C f^(n)(z)
//              + A q^n f^(n)(qz) + D [n = 0],
// filling out.d[1..depth] from out.d[0] and the inner jet at qz.
template <std::floating_point T>
void rebuild_from_value(const EquationParams<T>& p, Jet<T>& out,
                        const Jet<T>& inner, int depth) {
    using complex = std::complex<T>;
    out.d.resize(static_cast<std::size_t>(depth) + 1);
    complex qn{T(1)};
    for (int n = 0; n < depth; ++n) {
        complex quad{};
        for (int k = 0; k <= n; ++k)
            quad += binom<T>(n, k) * out.d[static_cast<std::size_t>(k)] *
                    out.d[static_cast<std::size_t>(n - k)];
        complex next = p.B * quad + p.C * out.d[static_cast<std::size_t>(n)] +
                       p.A * qn * inner.d[static_cast<std::size_t>(n)];
        if (n == 0) next += p.D;
        out.d[static_cast<std::size_t>(n + 1)] = next;
        qn *= p.q;
    }
}

template <std::floating_point T>
void check_finite_jet(const Jet<T>& j) {
    for (const auto& c : j.d)
        if (!(std::isfinite(c.real()) && std::isfinite(c.imag())))
            throw numerical_error("continuation produced a non-finite derivative");
}

// Exact jet at q * base from a jet at base, consuming one derivative:
// differentiating f'(z) = A f(qz) + B f^2 + C f + D j times at the base and
// solving for f^(j)(q * base) gives
//   f^(j)(q w) = [f^(j+1)(w) - B sum_i C(j,i) f^(i) f^(j-i)(w) - C f^(j)(w)
//                - D (j = 0)] / (A q^j).
// Pure algebra, valid for any q != 0; the move is outward when |q| > 1 and
// inward when |q| < 1.
template <std::floating_point T>
Jet<T> rescaled_jet(const EquationParams<T>& p, const Jet<T>& jet) {
    using complex = std::complex<T>;
    const int m = jet.depth();
    Jet<T> out;
    out.base = p.q * jet.base;
    out.d.assign(static_cast<std::size_t>(m), complex{});
    complex qj{T(1)};
    for (int j = 0; j < m; ++j) {
        complex quad{};
        for (int i = 0; i <= j; ++i)
            quad += binom<T>(j, i) * jet.d[static_cast<std::size_t>(i)] *
                    jet.d[static_cast<std::size_t>(j - i)];
        complex num = jet.d[static_cast<std::size_t>(j + 1)] - p.B * quad -
                      p.C * jet.d[static_cast<std::size_t>(j)];
        if (j == 0) num -= p.D;
        out.d[static_cast<std::size_t>(j)] = num / (p.A * qj);
        qj *= p.q;
    }
    return out;
}

} // namespace detail

/**
 * @brief Advance a jet one rescaling step outward.
 *
 * For |q| > 1 the target is q * base and the equation gives the new jet by
 * exact algebra: differentiating f'(z) = A f(qz) + B f^2 + C f + D at the
 * base point j times and solving for f^(j)(q * base) yields
 *   f^(j)(qw) = [f^(j+1)(w) - B sum_i C(j,i) f^(i) f^(j-i)(w) - C f^(j)(w)
 *               - D*(j=0)] / (A q^j),
 * which consumes one derivative per step (output depth = input depth - 1).
 *
 * For |q| < 1 the outward direction is base / q, where the equation offers
 * no algebraic shortcut; instead the jet walks a pyramid of self-similar
 * rings. Ring j covers [q^j base, q^(j-1) base] on the geometric grid
 * R_j[i] = q^j base q^(-i/M) and is anchored at its inner end by the exact
 * rescaled jet at q^j base (one derivative per ring). Taylor micro-steps
 * supply values along a ring while the derivative ladder of the equation
 * rebuilds full jets from ring j+1, whose points sit at exactly q R_j[i].
 * The deepest ring has nothing below it and falls back to Taylor-shifted
 * jets; the truncation that introduces is damped on every rebuild level
 * above it. The returned ring is j = 0 and the depth contract matches the
 * algebraic branch.
 *
 * Accuracy of the |q| < 1 branch is set by the jet depth (micro-step ratios
 * are ~|1 - q^(1/M)|, truncated at the input depth); shallow jets give
 * rough values. evaluate_continued drives this machinery at full depth.
 *
 * @throws validation_error for |q| = 1 or depth outside [1, kJetMaxDepth].
 */
template <std::floating_point T>
Jet<T> continue_step(const EquationParams<T>& p, const Jet<T>& jet,
                     const ContinuationOptions<T>& opts = {}) {
    using complex = std::complex<T>;
    p.validate();
    const int m = jet.depth();
    if (m < 1)
        throw validation_error("continuation consumes one derivative: depth >= 1 required");
    if (m > kJetMaxDepth)
        throw validation_error("jet depth exceeds the supported maximum");
    if (opts.micro_steps < 1 || opts.micro_steps > 64)
        throw validation_error("micro step count must be in [1, 64]");
    T aq = std::abs(p.q);
    if (aq == T(1))
        throw validation_error("continuation requires |q| != 1");
    detail::check_pole_distance(opts, jet.base);

    if (aq > T(1)) {
        Jet<T> out = detail::rescaled_jet(p, jet);
        detail::check_pole_distance(opts, out.base);
        detail::check_finite_jet(out);
        return out;
    }

    // |q| < 1: ring pyramid toward base / q.
    const int M = opts.micro_steps;
    const complex root = std::pow(p.q, complex{T(-1) / T(M)});
    // Each anchor level divides by A q^j, so cancellation noise in the chain
    // grows like the accumulated power of 1/|q|. Stop deepening once the
    // chain would lose roughly six digits; the deepest ring absorbs the
    // remaining levels with Taylor shifts, whose truncation is damped on
    // every rebuild level above it. Ring j is rebuilt at depth m - j >= 1.
    const T loss_budget = T(6) * std::numbers::ln10_v<T>;
    const T per_level = -std::log(aq);
    const int cap = static_cast<int>(
        (T(1) + std::sqrt(T(1) + T(8) * loss_budget / per_level)) / T(2));
    const int bottom = std::min(m - 1, std::max(1, cap));

    auto ring_points = [&](int j) {
        std::vector<complex> pts(static_cast<std::size_t>(M) + 1);
        complex w = jet.base;
        for (int i = 0; i < j; ++i) w *= p.q;
        pts[0] = w;
        for (int i = 1; i <= M; ++i)
            pts[static_cast<std::size_t>(i)] =
                pts[static_cast<std::size_t>(i - 1)] * root;
        return pts;
    };

    // exact anchors at q^j base, one derivative spent per level
    std::vector<Jet<T>> anchor(static_cast<std::size_t>(bottom) + 1);
    anchor[0] = jet;
    for (int j = 1; j <= bottom; ++j) {
        anchor[static_cast<std::size_t>(j)] =
            detail::rescaled_jet(p, anchor[static_cast<std::size_t>(j - 1)]);
        detail::check_pole_distance(opts, anchor[static_cast<std::size_t>(j)].base);
        detail::check_finite_jet(anchor[static_cast<std::size_t>(j)]);
    }

    // deepest ring: cumulative Taylor shifts from its anchor
    std::vector<Jet<T>> below(static_cast<std::size_t>(M) + 1);
    {
        auto pts = ring_points(bottom);
        below[0] = anchor[static_cast<std::size_t>(bottom)];
        for (int i = 1; i <= M; ++i) {
            detail::check_pole_distance(opts, pts[static_cast<std::size_t>(i)]);
            below[static_cast<std::size_t>(i)] =
                taylor_shift(below[static_cast<std::size_t>(i - 1)],
                             pts[static_cast<std::size_t>(i)] -
                                 pts[static_cast<std::size_t>(i - 1)]);
        }
    }
    // rebuild walks up the pyramid, ring j fed by ring j + 1
    for (int j = bottom - 1; j >= 0; --j) {
        auto pts = ring_points(j);
        std::vector<Jet<T>> ring(static_cast<std::size_t>(M) + 1);
        ring[0] = anchor[static_cast<std::size_t>(j)];
        for (int i = 1; i <= M; ++i) {
            detail::check_pole_distance(opts, pts[static_cast<std::size_t>(i)]);
            Jet<T> next;
            next.base = pts[static_cast<std::size_t>(i)];
            next.d.assign(1, taylor_eval(ring[static_cast<std::size_t>(i - 1)],
                                         pts[static_cast<std::size_t>(i)]));
            detail::rebuild_from_value(p, next, below[static_cast<std::size_t>(i)],
                                       m - j);
            detail::check_finite_jet(next);
            ring[static_cast<std::size_t>(i)] = std::move(next);
        }
        below = std::move(ring);
    }
    Jet<T> cur = std::move(below[static_cast<std::size_t>(M)]);
    cur.d.resize(static_cast<std::size_t>(m));
    return cur;
}

/**
 * @brief Value of a solution at z, reached by k rescaling steps from the
 *        base expansion disc.
 *
 * k = 0 is plain evaluation. Otherwise the walk starts inside the declared
 * radius R and ends at z, legal when |z| < R * |q|^k (|q| > 1) or
 * |z| < R * |q|^-k (|q| < 1). For |q| > 1 a depth-k jet at z * q^-k is
 * pushed outward algebraically. For |q| < 1 the ring cascade walks
 * W_j = z * q^(k-j) with micro-steps; ring j's inner points coincide with
 * ring j-1's micro grid, so each ring's jets are built once and reused,
 * and ring 1 reads its inner jets directly from the base expansion.
 *
 * An expansion whose tail terminates (infinite radius) is evaluated
 * directly; there is nothing to continue past.
 *
 * @throws formal_series_error for formal expansions.
 * @throws validation_error when z is out of reach for k steps, k is out of
 *         range, or the expansion is centered away from 0.
 */
template <std::floating_point T>
std::complex<T> evaluate_continued(const EquationParams<T>& p,
                                   const SolutionSeries<T>& sol, std::complex<T> z,
                                   int k, const ContinuationOptions<T>& opts = {}) {
    using complex = std::complex<T>;
    p.validate();
    if (sol.formal)
        throw formal_series_error("formal expansions cannot be continued");
    if (k < 0 || k > kMaxContinuationSteps)
        throw validation_error("step count must be in [0, 16]");
    if (sol.series.center() != complex{})
        throw validation_error("continuation requires an expansion centered at 0");
    const EquationParams<T> pe =
        sol.variable == SeriesVariable::normalized ? p.normalized() : p;

    if (std::isinf(sol.radius) || k == 0) {
        if (!(std::abs(z) < sol.radius))
            throw validation_error("target modulus exceeds the reachable radius");
        return evaluate(sol.series, z);
    }
    T aq = std::abs(p.q);
    if (aq == T(1))
        throw validation_error("continuation requires |q| != 1");
    if (!(std::abs(z) < continued_radius(sol.radius, p.q, k)))
        throw validation_error("target modulus exceeds the reachable radius after k steps");

    if (aq > T(1)) {
        complex w = z;
        for (int i = 0; i < k; ++i) w /= p.q;
        Jet<T> jet = jet_from_series(sol, w, k);
        ContinuationOptions<T> step_opts = opts;
        for (int i = 0; i < k; ++i) jet = continue_step(pe, jet, step_opts);
        return jet.d[0];
    }

    // |q| < 1 ring cascade
    const int M = opts.micro_steps;
    if (M < 1 || M > 64)
        throw validation_error("micro step count must be in [1, 64]");
    const int depth = std::min(kJetMaxDepth, sol.series.order());
    if (depth < 2)
        throw validation_error("expansion too short to drive the cascade");
    const complex root = std::pow(p.q, complex{T(-1) / T(M)});

    // ring 0 sits inside the base disc: points z * q^(k+1) * root^i
    std::vector<complex> ring_pts(static_cast<std::size_t>(M) + 1);
    {
        complex w = z;
        for (int i = 0; i <= k; ++i) w *= p.q;
        ring_pts[0] = w;
        for (int i = 1; i <= M; ++i)
            ring_pts[static_cast<std::size_t>(i)] =
                ring_pts[static_cast<std::size_t>(i - 1)] * root;
    }
    std::vector<Jet<T>> prev(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i <= M; ++i) {
        detail::check_pole_distance(opts, ring_pts[static_cast<std::size_t>(i)]);
        prev[static_cast<std::size_t>(i)] =
            jet_from_series(sol, ring_pts[static_cast<std::size_t>(i)], depth);
    }

    // segment start W_0 = z * q^k = ring_pts[0] / q
    Jet<T> cur = jet_from_series(sol, ring_pts[0] / p.q, depth);
    for (int j = 1; j <= k; ++j) {
        std::vector<Jet<T>> ring(static_cast<std::size_t>(M) + 1);
        ring[0] = cur;
        for (int i = 1; i <= M; ++i) {
            complex zeta = prev[static_cast<std::size_t>(i)].base / pe.q;
            detail::check_pole_distance(opts, zeta);
            Jet<T> next;
            next.base = zeta;
            next.d.assign(1, taylor_eval(ring[static_cast<std::size_t>(i - 1)], zeta));
            detail::rebuild_from_value(pe, next, prev[static_cast<std::size_t>(i)], depth);
            detail::check_finite_jet(next);
            ring[static_cast<std::size_t>(i)] = std::move(next);
        }
        cur = ring[static_cast<std::size_t>(M)];
        prev = std::move(ring);
    }
    return taylor_eval(cur, z);
}

} // namespace qpan

#endif // QPAN_CONTINUATION_HPP
