#ifndef QPAN_RATIONAL_HPP
#define QPAN_RATIONAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <utility>
#include <vector>

#include "qpan/errors.hpp"
#include "qpan/poly.hpp"

namespace qpan {

/// Largest polynomial degree accepted by the companion-matrix root finder.
inline constexpr int kMaxRootDegree = 32;

/// Relative tolerance under which computed roots are merged into one
/// multiple root.
inline constexpr double kRootClusterRel = 1e-5;

/// Relative coefficient tolerance used by the Euclidean polynomial gcd.
inline constexpr double kGcdRelTol = 1e-8;

/// @brief A pole (or any tagged point) with its multiplicity.
template <std::floating_point T>
struct PolePoint {
    std::complex<T> location;
    int multiplicity{1};
};

/// @brief Quotient and remainder of polynomial long division.
template <std::floating_point T>
struct PolyDivision {
    Polynomial<T> quotient;
    Polynomial<T> remainder;
};

/// @brief Long division a = quotient * b + remainder with deg(remainder) <
/// deg(b).
///
/// The leading term cancelled at each elimination step is zeroed exactly, so
/// the remainder degree always drops below the divisor degree even in
/// floating point.
///
/// @throws validation_error when dividing by the zero polynomial.
template <std::floating_point T>
[[nodiscard]] PolyDivision<T> poly_divmod(const Polynomial<T>& a,
                                          const Polynomial<T>& b) {
    if (b.zero()) throw validation_error("polynomial division by zero");
    const int da = a.degree();
    const int db = b.degree();
    if (da < db) return {Polynomial<T>{}, a};
    std::vector<std::complex<T>> rem = a.coefficients();
    std::vector<std::complex<T>> quot(static_cast<std::size_t>(da - db) + 1);
    const std::complex<T> lead = b.leading();
    for (int k = da; k >= db; --k) {
        const std::complex<T> factor = rem[static_cast<std::size_t>(k)] / lead;
        quot[static_cast<std::size_t>(k - db)] = factor;
        for (int j = 0; j < db; ++j)
            rem[static_cast<std::size_t>(k - db + j)] -=
                factor * b.coeff(j);
        rem[static_cast<std::size_t>(k)] = std::complex<T>{};
    }
    rem.resize(static_cast<std::size_t>(db > 0 ? db : 0));
    return {Polynomial<T>(std::move(quot)), Polynomial<T>(std::move(rem))};
}

namespace detail {

template <std::floating_point T>
T max_abs_coeff(const Polynomial<T>& p) {
    T m{};
    for (const auto& c : p.coefficients()) m = std::max(m, std::abs(c));
    return m;
}

/// Rescales to unit maximum coefficient; the zero polynomial passes through.
template <std::floating_point T>
Polynomial<T> unit_scale(const Polynomial<T>& p) {
    const T m = max_abs_coeff(p);
    if (m == T(0)) return p;
    return scale(p, std::complex<T>{T(1) / m});
}

/// Drops leading coefficients with modulus below tol; may return zero.
template <std::floating_point T>
Polynomial<T> trim_leading(const Polynomial<T>& p, T tol) {
    const auto& c = p.coefficients();
    std::size_t n = c.size();
    while (n > 0 && std::abs(c[n - 1]) < tol) --n;
    return Polynomial<T>(
        std::vector<std::complex<T>>(c.begin(), c.begin() + n));
}

}  // namespace detail

/// @brief Monic greatest common divisor by the Euclidean algorithm with a
/// relative coefficient cutoff.
///
/// Inputs are rescaled to unit maximum coefficient at every round and
/// remainder coefficients below rel_tol are treated as zero, which keeps the
/// iteration stable for the small, well-separated inputs this library works
/// with. A degree-0 result means the arguments are coprime. The gcd of two
/// zero polynomials is the zero polynomial.
template <std::floating_point T>
[[nodiscard]] Polynomial<T> poly_gcd(Polynomial<T> a, Polynomial<T> b,
                                     T rel_tol = T(kGcdRelTol)) {
    a = detail::unit_scale(a);
    b = detail::unit_scale(b);
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.zero()) {
        Polynomial<T> r = poly_divmod(a, b).remainder;
        r = detail::trim_leading(r, rel_tol);
        a = std::move(b);
        b = detail::unit_scale(r);
    }
    if (a.zero()) return a;
    return scale(a, std::complex<T>{T(1)} / a.leading());
}

/// @brief Roots of a polynomial via the eigenvalues of its companion matrix,
/// sorted by real part, then imaginary part.
///
/// Provided for double and long double scalars. Degree 0 yields an empty
/// list.
///
/// @throws validation_error for the zero polynomial or degree above 32.
template <std::floating_point T>
[[nodiscard]] std::vector<std::complex<T>> polynomial_roots(
    const Polynomial<T>& p);

/// @brief Merges nearby computed roots into multiple roots.
///
/// Roots within rel_tol of a cluster mean (relative to max(1, |mean|)) are
/// absorbed; cluster locations are the means of their members. The result is
/// sorted by location.
template <std::floating_point T>
[[nodiscard]] std::vector<PolePoint<T>> cluster_roots(
    const std::vector<std::complex<T>>& roots, T rel_tol = T(kRootClusterRel)) {
    std::vector<std::complex<T>> sums;
    std::vector<int> counts;
    for (const auto& z : roots) {
        bool placed = false;
        for (std::size_t i = 0; i < sums.size(); ++i) {
            const std::complex<T> mean = sums[i] / T(counts[i]);
            if (std::abs(z - mean) <=
                rel_tol * std::max(T(1), std::abs(mean))) {
                sums[i] += z;
                ++counts[i];
                placed = true;
                break;
            }
        }
        if (!placed) {
            sums.push_back(z);
            counts.push_back(1);
        }
    }
    std::vector<PolePoint<T>> clusters;
    clusters.reserve(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i)
        clusters.push_back(PolePoint<T>{sums[i] / T(counts[i]), counts[i]});
    std::sort(clusters.begin(), clusters.end(),
              [](const PolePoint<T>& x, const PolePoint<T>& y) {
                  if (x.location.real() != y.location.real())
                      return x.location.real() < y.location.real();
                  return x.location.imag() < y.location.imag();
              });
    return clusters;
}

/**
 * @brief Quotient of two polynomials in z.
 *
 * The denominator must not vanish identically. The irreducible flag is a
 * caller-maintained promise that numerator and denominator share no factor;
 * reduce() establishes it, and the operations below preserve it where the
 * algebra guarantees preservation.
 */
template <std::floating_point T>
class RationalFunction {
  public:
    using complex = std::complex<T>;

    /// @brief The zero function 0/1.
    RationalFunction()
        : den_(Polynomial<T>::constant(complex{T(1)})), irreducible_(true) {}

    /// @throws validation_error if the denominator is identically zero.
    RationalFunction(Polynomial<T> numerator, Polynomial<T> denominator,
                     bool irreducible = false)
        : num_(std::move(numerator)),
          den_(std::move(denominator)),
          irreducible_(irreducible) {
        if (den_.zero())
            throw validation_error(
                "rational function denominator is identically zero");
    }

    const Polynomial<T>& numerator() const { return num_; }
    const Polynomial<T>& denominator() const { return den_; }
    bool irreducible() const { return irreducible_; }

    /// @brief max(deg numerator, deg denominator); meaningful on the reduced
    /// form, where it is the characteristic growth factor.
    int degree() const { return std::max(num_.degree(), den_.degree()); }

    /// @brief Pointwise value; at a denominator zero the complex division
    /// yields a non-finite value rather than throwing.
    friend complex evaluate(const RationalFunction& f, complex z) {
        return evaluate(f.num_, z) / evaluate(f.den_, z);
    }

    /// @brief The function z -> f(q z).
    friend RationalFunction dilate(const RationalFunction& f, complex q) {
        return RationalFunction(dilate(f.num_, q), dilate(f.den_, q),
                                f.irreducible_);
    }

    /// @brief The function f - a; shares no factor with the original
    /// denominator when f is irreducible, so the flag carries over.
    friend RationalFunction subtract_constant(const RationalFunction& f,
                                              complex a) {
        return RationalFunction(add(f.num_, scale(f.den_, -a)), f.den_,
                                f.irreducible_);
    }

    /// @brief The function 1/f.
    /// @throws validation_error when f is identically zero.
    friend RationalFunction reciprocal(const RationalFunction& f) {
        if (f.num_.zero())
            throw validation_error(
                "the zero function has no rational reciprocal");
        return RationalFunction(f.den_, f.num_, f.irreducible_);
    }

    /// @brief Symbolic composition outer(inner(z)) by homogenization: with
    /// inner = n/d and m the larger outer degree, y^i maps to n^i d^(m-i).
    friend RationalFunction compose(const RationalFunction& outer,
                                    const RationalFunction& inner) {
        const int m = std::max(outer.degree(), 0);
        std::vector<Polynomial<T>> npow(static_cast<std::size_t>(m) + 1);
        std::vector<Polynomial<T>> dpow(static_cast<std::size_t>(m) + 1);
        npow[0] = Polynomial<T>::constant(complex{T(1)});
        dpow[0] = npow[0];
        for (int i = 1; i <= m; ++i) {
            npow[static_cast<std::size_t>(i)] =
                mul(npow[static_cast<std::size_t>(i - 1)], inner.num_);
            dpow[static_cast<std::size_t>(i)] =
                mul(dpow[static_cast<std::size_t>(i - 1)], inner.den_);
        }
        auto lift = [&](const Polynomial<T>& p) {
            Polynomial<T> acc;
            for (int i = 0; i <= p.degree(); ++i)
                acc = add(acc,
                          scale(mul(npow[static_cast<std::size_t>(i)],
                                    dpow[static_cast<std::size_t>(m - i)]),
                                p.coeff(i)));
            return acc;
        };
        return RationalFunction(lift(outer.num_), lift(outer.den_), false);
    }

    /// @brief Cancels the numeric gcd of numerator and denominator and marks
    /// the result irreducible.
    friend RationalFunction reduce(const RationalFunction& f,
                                   T rel_tol = T(kGcdRelTol)) {
        if (f.num_.zero()) return RationalFunction();
        Polynomial<T> g = poly_gcd(f.num_, f.den_, rel_tol);
        if (g.degree() <= 0)
            return RationalFunction(f.num_, f.den_, true);
        return RationalFunction(poly_divmod(f.num_, g).quotient,
                                poly_divmod(f.den_, g).quotient, true);
    }

  private:
    Polynomial<T> num_;
    Polynomial<T> den_;
    bool irreducible_{false};
};

/// @brief Denominator roots clustered into (location, multiplicity) pairs.
///
/// Meaningful as the pole list only when numerator and denominator share no
/// factor; reduce() first if unsure.
template <std::floating_point T>
[[nodiscard]] std::vector<PolePoint<T>> rational_poles(
    const RationalFunction<T>& f) {
    if (f.denominator().degree() < 1) return {};
    return cluster_roots(polynomial_roots(f.denominator()));
}

}  // namespace qpan

#endif
