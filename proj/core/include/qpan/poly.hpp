#ifndef QPAN_POLY_HPP
#define QPAN_POLY_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <utility>
#include <vector>

#include "qpan/errors.hpp"

namespace qpan {

/**
 * @brief Dense polynomial with complex coefficients.
 *
 * Coefficient k multiplies z^k. Exactly-zero trailing coefficients are
 * trimmed on construction, so the zero polynomial is the empty sequence and
 * degree() reports -1 for it. Coefficients must be finite.
 */
template <std::floating_point T = double>
class Polynomial {
  public:
    using complex = std::complex<T>;

    Polynomial() = default;

    explicit Polynomial(std::vector<complex> coeffs) : c_(std::move(coeffs)) {
        for (const auto& v : c_)
            if (!(std::isfinite(v.real()) && std::isfinite(v.imag())))
                throw numerical_error("polynomial coefficient is not finite");
        trim();
    }

    /// @brief Constant polynomial; the zero constant gives the zero polynomial.
    static Polynomial constant(complex v) { return Polynomial({v}); }

    bool zero() const { return c_.empty(); }

    /// @brief Degree, with -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    /// @brief Coefficient of z^k; zero outside the stored range.
    complex coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(c_.size())) return complex{};
        return c_[static_cast<std::size_t>(k)];
    }

    /// @brief Leading coefficient; zero for the zero polynomial.
    complex leading() const { return c_.empty() ? complex{} : c_.back(); }

    const std::vector<complex>& coefficients() const { return c_; }

    friend Polynomial add(const Polynomial& a, const Polynomial& b) {
        std::vector<complex> c(std::max(a.c_.size(), b.c_.size()), complex{});
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
        return Polynomial(std::move(c));
    }

    friend Polynomial scale(const Polynomial& a, complex s) {
        std::vector<complex> c = a.c_;
        for (auto& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    friend Polynomial mul(const Polynomial& a, const Polynomial& b) {
        if (a.zero() || b.zero()) return Polynomial{};
        std::vector<complex> c(a.c_.size() + b.c_.size() - 1, complex{});
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }

    friend Polynomial derivative(const Polynomial& a) {
        if (a.c_.size() <= 1) return Polynomial{};
        std::vector<complex> c(a.c_.size() - 1);
        for (std::size_t k = 1; k < a.c_.size(); ++k)
            c[k - 1] = T(k) * a.c_[k];
        return Polynomial(std::move(c));
    }

    /// @brief The polynomial z -> p(q z): coefficient k picks up q^k.
    friend Polynomial dilate(const Polynomial& a, complex q) {
        std::vector<complex> c = a.c_;
        complex qk{T(1)};
        for (std::size_t k = 0; k < c.size(); ++k) {
            c[k] *= qk;
            qk *= q;
        }
        return Polynomial(std::move(c));
    }

    friend complex evaluate(const Polynomial& a, complex z) {
        complex acc{};
        for (std::size_t k = a.c_.size(); k-- > 0;) acc = acc * z + a.c_[k];
        return acc;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == complex{}) c_.pop_back();
    }

    std::vector<complex> c_;
};

} // namespace qpan

#endif // QPAN_POLY_HPP
