#ifndef QPAN_JETS_HPP
#define QPAN_JETS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <vector>

#include "qpan/errors.hpp"
#include "qpan/solver.hpp"

namespace qpan {

/// @brief Largest jet depth the continuation engine works with; binomial
///        weights are tabulated once up to this order.
inline constexpr int kJetMaxDepth = 16;

namespace detail {

// Pascal's triangle through kJetMaxDepth + 1 rows, exact in double range.
constexpr auto make_binomials() {
    std::array<std::array<long long, kJetMaxDepth + 2>, kJetMaxDepth + 2> b{};
    for (int n = 0; n <= kJetMaxDepth + 1; ++n) {
        b[static_cast<std::size_t>(n)][0] = 1;
        for (int k = 1; k <= n; ++k)
            b[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
                b[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
                (k <= n - 1
                     ? b[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)]
                     : 0);
    }
    return b;
}

inline constexpr auto kBinomial = make_binomials();

template <std::floating_point T>
T binom(int n, int k) {
    return static_cast<T>(
        kBinomial[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
}

} // namespace detail

/**
 * @brief Derivative data of one function at one point:
 *        d[k] = f^(k)(base) for k = 0 .. depth.
 */
template <std::floating_point T = double>
struct Jet {
    std::complex<T> base{};
    std::vector<std::complex<T>> d;

    int depth() const { return static_cast<int>(d.size()) - 1; }
};

/**
 * @brief Evaluate the jet's Taylor polynomial at z.
 *
 * Plain Horner on the factorial-scaled coefficients; accuracy is governed
 * by |z - base| against the distance to the nearest singularity, which the
 * continuation drivers keep small.
 */
template <std::floating_point T>
std::complex<T> taylor_eval(const Jet<T>& j, std::complex<T> z) {
    std::complex<T> h = z - j.base;
    std::complex<T> acc{};
    T fact = 1;
    std::vector<T> inv_fact(j.d.size());
    for (std::size_t k = 0; k < j.d.size(); ++k) {
        if (k > 0) fact *= T(k);
        inv_fact[k] = T(1) / fact;
    }
    for (int k = j.depth(); k >= 0; --k)
        acc = acc * h + j.d[static_cast<std::size_t>(k)] * inv_fact[static_cast<std::size_t>(k)];
    return acc;
}

/**
 * @brief Recenter a jet from base to base + delta by Taylor expansion,
 *        keeping the same depth (the dropped tail is the truncation error).
 */
template <std::floating_point T>
Jet<T> taylor_shift(const Jet<T>& j, std::complex<T> delta) {
    const int m = j.depth();
    Jet<T> out;
    out.base = j.base + delta;
    out.d.assign(j.d.size(), std::complex<T>{});
    for (int k = m; k >= 0; --k) {
        // Horner over the derivative-of-derivative expansion:
        // f^(k)(b+delta) = sum_j f^(k+j)(b) delta^j / j!
        std::complex<T> acc{};
        T inv_fact = 1;
        std::vector<std::complex<T>> terms;
        terms.reserve(static_cast<std::size_t>(m - k) + 1);
        for (int i = 0; k + i <= m; ++i) {
            if (i > 0) inv_fact /= T(i);
            terms.push_back(j.d[static_cast<std::size_t>(k + i)] * inv_fact);
        }
        for (int i = static_cast<int>(terms.size()) - 1; i >= 0; --i)
            acc = acc * delta + terms[static_cast<std::size_t>(i)];
        out.d[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

/**
 * @brief Extract f, f', ..., f^(m) at a point from a truncated solution
 *        expansion.
 *
 * The regular part is differentiated termwise m times; a simple-pole part
 * contributes (-1)^k k! c / (z - center)^(k+1) in closed form. The point
 * must lie strictly inside the declared evaluation radius.
 *
 * @throws formal_series_error for formal expansions.
 * @throws validation_error outside the radius, at the pole, or when the
 *         expansion is too short to support m derivatives.
 */
template <std::floating_point T>
Jet<T> jet_from_series(const SolutionSeries<T>& sol, std::complex<T> z, int m) {
    using complex = std::complex<T>;
    if (sol.formal)
        throw formal_series_error("formal expansions cannot be evaluated");
    if (m < 0) throw validation_error("jet depth must be >= 0");
    if (m > sol.series.order())
        throw validation_error("expansion too short for the requested jet depth");
    if (sol.series.low() < -1)
        throw validation_error("jets support at most a simple pole part");
    complex w = z - sol.series.center();
    if (!(std::abs(w) < sol.radius))
        throw validation_error("point is outside the declared evaluation radius");
    if (sol.series.has_pole() && w == complex{})
        throw validation_error("jet requested at the pole of the expansion");

    Jet<T> out;
    out.base = z;
    out.d.assign(static_cast<std::size_t>(m) + 1, complex{});

    // regular part: f^(k)(z) = sum_{n>=k} a_n n!/(n-k)! w^{n-k}
    for (int k = 0; k <= m; ++k) {
        complex acc{};
        for (int n = sol.series.order(); n >= k; --n) {
            T fall = 1;
            for (int i = 0; i < k; ++i) fall *= T(n - i);
            acc = acc * w + sol.series.coeff(n) * fall;
        }
        out.d[static_cast<std::size_t>(k)] = acc;
    }
    if (sol.series.has_pole()) {
        complex inv = complex{T(1)} / w;
        complex c = sol.series.coeff(-1);
        complex p = c * inv; // (-1)^k k! c / w^{k+1}
        T sign_fact = 1;
        for (int k = 0; k <= m; ++k) {
            if (k > 0) {
                sign_fact *= T(-k);
                p *= inv;
            }
            out.d[static_cast<std::size_t>(k)] += sign_fact * p;
        }
    }
    return out;
}

} // namespace qpan

#endif // QPAN_JETS_HPP
