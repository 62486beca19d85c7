#ifndef QPAN_SERIES_HPP
#define QPAN_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <utility>
#include <vector>

#include "qpan/errors.hpp"

namespace qpan {

/**
 * @brief Relative threshold below which a leading pole coefficient produced
 *        by cancellation is treated as exactly zero.
 *
 * When two expansions with opposite simple poles are added, the pole
 * coefficient of the sum is a difference of nearly equal numbers; anything
 * smaller than 2^-40 of the largest surviving coefficient is floating-point
 * debris, not a pole.
 */
inline constexpr double kPoleTrimRelative = 0x1p-40;

/**
 * @brief Finite Laurent-flavored expansion around a fixed center.
 *
 * Stores coefficients of (z - center)^n for n = low() .. order(). Solution
 * series use low in {-1, 0}; low = -2 arises internally (derivative or
 * product of simple-pole expansions) and is accepted so residuals can be
 * formed. order() is the reliability horizon: coefficients beyond it are
 * unknown, not zero.
 */
template <std::floating_point T = double>
class TruncatedSeries {
public:
    using complex = std::complex<T>;

    /**
     * @brief Wrap raw coefficients.
     * @param center expansion center.
     * @param low exponent of coeffs.front(), in {-2, -1, 0}.
     * @param coeffs coefficient of (z-center)^(low+i) at index i; must be
     *        non-empty and finite.
     *
     * Leading exactly-zero pole coefficients are dropped (the expansion is
     * promoted toward a Taylor series). order() is low + coeffs.size() - 1.
     */
    TruncatedSeries(complex center, int low, std::vector<complex> coeffs)
        : center_(center), low_(low), coeffs_(std::move(coeffs)) {
        if (low_ < -2 || low_ > 0)
            throw validation_error("series leading exponent must be in {-2,-1,0}");
        if (coeffs_.empty())
            throw validation_error("series needs at least one coefficient");
        check_finite();
        trim_pole_part(T(0));
    }

    /// @brief Taylor expansion (low = 0) from a dense coefficient list.
    static TruncatedSeries taylor(complex center, std::vector<complex> coeffs) {
        return TruncatedSeries(center, 0, std::move(coeffs));
    }

    /// @brief Identically zero expansion of the given order.
    static TruncatedSeries zero(complex center, int order) {
        if (order < 0)
            throw validation_error("zero series needs order >= 0");
        return TruncatedSeries(center, 0,
                               std::vector<complex>(static_cast<std::size_t>(order) + 1));
    }

    complex center() const { return center_; }

    /// @brief Leading exponent (most negative stored power).
    int low() const { return low_; }

    /// @brief Highest exponent with a trustworthy coefficient.
    int order() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }

    /// @brief Coefficient of (z - center)^n; zero outside [low, order].
    complex coeff(int n) const {
        if (n < low_ || n > order()) return complex{};
        return coeffs_[static_cast<std::size_t>(n - low_)];
    }

    bool has_pole() const { return low_ < 0; }

    /// @brief Largest coefficient magnitude (0 for the zero expansion).
    T max_abs_coeff() const {
        T m = 0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    /**
     * @brief Sum of two expansions about the same center.
     *
     * The result is reliable through min(order, other.order). If the
     * summands carry opposite pole parts, leading coefficients smaller than
     * kPoleTrimRelative of the largest coefficient magnitude are dropped,
     * so exact pole cancellation yields a genuine Taylor expansion instead
     * of a pole with a ~1e-13 residue.
     */
    friend TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (a.center_ != b.center_)
            throw validation_error("cannot add series with different centers");
        int low = std::min(a.low_, b.low_);
        int order = std::min(a.order(), b.order());
        if (order < low)
            throw validation_error("summands share no reliable coefficient range");
        std::vector<complex> c(static_cast<std::size_t>(order - low) + 1);
        for (int n = low; n <= order; ++n)
            c[static_cast<std::size_t>(n - low)] = a.coeff(n) + b.coeff(n);
        TruncatedSeries r(a.center_, low, std::move(c));
        r.trim_pole_part(static_cast<T>(kPoleTrimRelative) * r.max_abs_coeff());
        return r;
    }

    /**
     * @brief Cauchy product of two expansions about the same center.
     *
     * Each factor is unknown beyond its own order, so coefficients of the
     * product are trustworthy only through
     * min(order, other.order) + min(low, other.low); everything above that
     * would involve unknown tail coefficients and is not emitted.
     */
    friend TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (a.center_ != b.center_)
            throw validation_error("cannot multiply series with different centers");
        int low = a.low_ + b.low_;
        if (low < -2)
            throw validation_error("product pole order exceeds 2");
        int order = std::min(a.order(), b.order()) + std::min(a.low_, b.low_);
        if (order < low)
            throw validation_error("factors share no reliable coefficient range");
        // Terms are accumulated over unordered index pairs {i, n-i}, each
        // pair summed before joining the total, so swapping the factors
        // reorders only commutative single operations: mul(a, b) and
        // mul(b, a) are identical to the last bit.
        auto term = [&](int i, int j) -> complex {
            if (i < a.low_ || i > a.order() || j < b.low_ || j > b.order())
                return complex{};
            return a.coeff(i) * b.coeff(j);
        };
        std::vector<complex> c(static_cast<std::size_t>(order - low) + 1);
        for (int n = low; n <= order; ++n) {
            complex acc{};
            int i_lo = std::min({a.low_, b.low_, n - a.order(), n - b.order()});
            for (int i = i_lo; 2 * i <= n; ++i) {
                int j = n - i;
                acc += i == j ? term(i, i) : term(i, j) + term(j, i);
            }
            c[static_cast<std::size_t>(n - low)] = acc;
        }
        return TruncatedSeries(a.center_, low, std::move(c));
    }

    /**
     * @brief Termwise derivative. Input must have low >= -1; a simple pole
     *        differentiates to a double pole (low = -2). The reliability
     *        horizon drops by one; the derivative of a constant expansion
     *        is the zero expansion of order 0.
     */
    friend TruncatedSeries differentiate(const TruncatedSeries& s) {
        if (s.low_ < -1)
            throw validation_error("cannot differentiate a series with low < -1");
        if (s.low_ == 0 && s.order() == 0)
            return zero(s.center_, 0);
        int low = s.low_ == -1 ? -2 : 0;
        int order = s.order() - 1;
        if (s.low_ == 0 && order < 0) order = 0;
        std::vector<complex> c(static_cast<std::size_t>(order - low) + 1);
        for (int n = s.low_; n <= s.order(); ++n) {
            if (n == 0) continue;
            c[static_cast<std::size_t>(n - 1 - low)] = T(n) * s.coeff(n);
        }
        return TruncatedSeries(s.center_, low, std::move(c));
    }

    /**
     * @brief Argument rescaling s(z) -> s(qz), defined for center 0 only
     *        (rescaling moves any other center). Coefficient n picks up a
     *        factor q^n, exactly one multiplication per coefficient.
     */
    friend TruncatedSeries dilate(const TruncatedSeries& s, complex q) {
        if (s.center_ != complex{})
            throw validation_error("dilate requires expansion center 0");
        if (q == complex{} || !(std::isfinite(q.real()) && std::isfinite(q.imag())))
            throw validation_error("dilate requires a finite nonzero factor");
        std::vector<complex> c(s.coeffs_.size());
        complex p = pow_int(q, s.low_);
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = s.coeffs_[i] * p;
            p *= q;
        }
        return TruncatedSeries(s.center_, s.low_, std::move(c));
    }

    /**
     * @brief Horner evaluation of the stored polynomial part plus explicit
     *        pole terms.
     * @throws validation_error at the expansion center when a pole part is
     *         present (the value is infinite there, not a rounding issue).
     */
    friend complex evaluate(const TruncatedSeries& s, complex z) {
        complex w = z - s.center_;
        if (s.low_ < 0 && w == complex{})
            throw validation_error("evaluation at the pole of the expansion");
        complex acc{};
        for (int n = s.order(); n >= std::max(s.low_, 0); --n)
            acc = acc * w + s.coeff(n);
        if (s.low_ < 0) {
            complex inv = complex{T(1)} / w;
            if (s.low_ <= -1) acc += s.coeff(-1) * inv;
            if (s.low_ <= -2) acc += s.coeff(-2) * inv * inv;
        }
        return acc;
    }

private:
    static complex pow_int(complex q, int n) {
        complex r{T(1)};
        for (int i = 0; i < std::abs(n); ++i) r *= q;
        return n < 0 ? complex{T(1)} / r : r;
    }

    void check_finite() const {
        for (const auto& c : coeffs_)
            if (!(std::isfinite(c.real()) && std::isfinite(c.imag())))
                throw numerical_error("series coefficient is not finite");
    }

    // Drop leading pole coefficients with magnitude <= threshold, promoting
    // the expansion toward low = 0. threshold 0 drops exact zeros only.
    void trim_pole_part(T threshold) {
        while (low_ < 0 && std::abs(coeffs_.front()) <= threshold) {
            coeffs_.front() = complex{};
            coeffs_.erase(coeffs_.begin());
            ++low_;
            if (coeffs_.empty()) {
                coeffs_.push_back(complex{});
                low_ = 0;
                return;
            }
        }
    }

    complex center_;
    int low_;
    std::vector<complex> coeffs_;
};

} // namespace qpan

#endif // QPAN_SERIES_HPP
