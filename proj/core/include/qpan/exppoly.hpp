#ifndef QPAN_EXPPOLY_HPP
#define QPAN_EXPPOLY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <utility>
#include <vector>

#include "qpan/errors.hpp"
#include "qpan/params.hpp"
#include "qpan/poly.hpp"

namespace qpan {

/// @brief Largest prefactor or exponent degree the engine accepts.
inline constexpr int kMaxExpPolyDegree = 64;

/// @brief Significant decimal digits used when deciding that two computed
///        exponent polynomials are the same frequency.
inline constexpr int kExponentMatchDigits = 12;

/**
 * @brief One term P(z) * exp(E(z)) of an exponential polynomial.
 *
 * Canonical terms carry no constant part in the exponent: it is folded into
 * the prefactor by ep_normalize. A zero exponent polynomial marks the plain
 * polynomial term.
 */
template <std::floating_point T = double>
struct ExpTerm {
    Polynomial<T> prefactor;
    Polynomial<T> exponent;
};

/**
 * @brief Finite sum of terms P_l(z) * exp(E_l(z)) in canonical form:
 *        exponents pairwise distinct, no zero prefactors, terms ordered by
 *        exponent. The zero function is the empty term list.
 */
template <std::floating_point T = double>
struct ExpPoly {
    std::vector<ExpTerm<T>> terms;
};

namespace detail {

template <std::floating_point T>
T round_significant(T x, int digits) {
    if (x == T(0)) return T(0);
    T mag = std::floor(std::log10(std::abs(x)));
    T scale = std::pow(T(10), T(digits - 1) - mag);
    return std::round(x * scale) / scale;
}

// Comparison key of an exponent polynomial: coefficients of z, z^2, ...
// rounded to kExponentMatchDigits significant digits. The constant part is
// folded away before keys are taken.
template <std::floating_point T>
std::vector<std::pair<T, T>> exponent_key(const Polynomial<T>& e) {
    std::vector<std::pair<T, T>> key;
    for (int k = 1; k <= e.degree(); ++k) {
        auto c = e.coeff(k);
        key.emplace_back(round_significant(c.real(), kExponentMatchDigits),
                         round_significant(c.imag(), kExponentMatchDigits));
    }
    while (!key.empty() && key.back() == std::pair<T, T>{T(0), T(0)})
        key.pop_back();
    return key;
}

} // namespace detail

/**
 * @brief Canonical form of a raw term list.
 *
 * Constant exponent parts are folded into prefactors, terms whose exponents
 * agree to kExponentMatchDigits significant digits are merged by adding
 * prefactors, zero prefactors are dropped, and terms are ordered by the
 * exponent key. Computed frequencies are never compared bitwise.
 *
 * @throws validation_error when any degree exceeds kMaxExpPolyDegree.
 */
template <std::floating_point T>
ExpPoly<T> ep_normalize(std::vector<ExpTerm<T>> raw) {
    using Key = std::vector<std::pair<T, T>>;
    for (auto& t : raw) {
        if (t.prefactor.degree() > kMaxExpPolyDegree ||
            t.exponent.degree() > kMaxExpPolyDegree)
            throw validation_error("exponential polynomial degree exceeds 64");
        auto c0 = t.exponent.coeff(0);
        if (c0 != std::complex<T>{}) {
            t.prefactor = scale(t.prefactor, std::exp(c0));
            std::vector<std::complex<T>> rest;
            for (int k = 1; k <= t.exponent.degree(); ++k)
                rest.push_back(t.exponent.coeff(k));
            rest.insert(rest.begin(), std::complex<T>{});
            t.exponent = Polynomial<T>(std::move(rest));
        }
    }
    std::vector<std::pair<Key, std::size_t>> order(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        order[i] = {detail::exponent_key(raw[i].exponent), i};
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return a.second < b.second;
              });

    ExpPoly<T> out;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        ExpTerm<T> merged = raw[order[i].second];
        while (j < order.size() && order[j].first == order[i].first) {
            merged.prefactor = add(merged.prefactor, raw[order[j].second].prefactor);
            ++j;
        }
        if (!merged.prefactor.zero()) out.terms.push_back(std::move(merged));
        i = j;
    }
    return out;
}

/// @brief Value of the exponential polynomial at z.
template <std::floating_point T>
std::complex<T> ep_eval(const ExpPoly<T>& f, std::complex<T> z) {
    std::complex<T> acc{};
    for (const auto& t : f.terms)
        acc += evaluate(t.prefactor, z) * std::exp(evaluate(t.exponent, z));
    return acc;
}

/// @brief Termwise derivative: (P e^E)' = (P' + P E') e^E.
template <std::floating_point T>
ExpPoly<T> ep_derivative(const ExpPoly<T>& f) {
    std::vector<ExpTerm<T>> raw;
    for (const auto& t : f.terms)
        raw.push_back({add(derivative(t.prefactor),
                           mul(t.prefactor, derivative(t.exponent))),
                       t.exponent});
    return ep_normalize(std::move(raw));
}

/// @brief The function z -> f(q z); exponent coefficient of z^t picks up q^t.
template <std::floating_point T>
ExpPoly<T> ep_dilate(const ExpPoly<T>& f, std::complex<T> q) {
    std::vector<ExpTerm<T>> raw;
    for (const auto& t : f.terms)
        raw.push_back({dilate(t.prefactor, q), dilate(t.exponent, q)});
    return ep_normalize(std::move(raw));
}

/// @brief Product, expanded termwise: exponents add, prefactors multiply.
template <std::floating_point T>
ExpPoly<T> ep_mul(const ExpPoly<T>& f, const ExpPoly<T>& g) {
    std::vector<ExpTerm<T>> raw;
    for (const auto& a : f.terms)
        for (const auto& b : g.terms)
            raw.push_back({mul(a.prefactor, b.prefactor),
                           add(a.exponent, b.exponent)});
    return ep_normalize(std::move(raw));
}

/**
 * @brief Defect of f as a candidate solution: f' - A f(qz) - B f^2 - C f - D
 *        in canonical form. An empty result means f solves the equation.
 */
template <std::floating_point T>
ExpPoly<T> ep_residual(const EquationParams<T>& p, const ExpPoly<T>& f) {
    p.validate();
    std::vector<ExpTerm<T>> raw;
    auto push_scaled = [&raw](const ExpPoly<T>& g, std::complex<T> s) {
        for (const auto& t : g.terms)
            raw.push_back({scale(t.prefactor, s), t.exponent});
    };
    push_scaled(ep_derivative(f), std::complex<T>{T(1)});
    push_scaled(ep_dilate(f, p.q), -p.A);
    push_scaled(ep_mul(f, f), -p.B);
    push_scaled(f, -p.C);
    raw.push_back({Polynomial<T>::constant(-p.D), Polynomial<T>{}});
    return ep_normalize(std::move(raw));
}

/**
 * @brief The term of a nonzero residual that cannot be cancelled by the
 *        others: its exponent is maximal by degree, then by modulus of the
 *        leading coefficient, then by (Re, Im) of the leading coefficient,
 *        then by (Re, Im) of the remaining coefficients from high power
 *        down. Linear independence of distinct-frequency exponentials makes
 *        any such surviving term a certificate that f is not a solution.
 *
 * @throws validation_error when the residual is empty.
 */
template <std::floating_point T>
ExpTerm<T> ep_leading_witness(const ExpPoly<T>& residual) {
    if (residual.terms.empty())
        throw validation_error("empty residual has no witness term");
    auto rank = [](const ExpTerm<T>& t) {
        std::vector<T> r;
        r.push_back(static_cast<T>(t.exponent.degree()));
        r.push_back(std::abs(t.exponent.leading()));
        r.push_back(t.exponent.leading().real());
        r.push_back(t.exponent.leading().imag());
        for (int k = t.exponent.degree() - 1; k >= 1; --k) {
            r.push_back(t.exponent.coeff(k).real());
            r.push_back(t.exponent.coeff(k).imag());
        }
        return r;
    };
    const ExpTerm<T>* best = &residual.terms.front();
    std::vector<T> best_rank = rank(*best);
    for (const auto& t : residual.terms) {
        auto r = rank(t);
        if (r > best_rank) {
            best = &t;
            best_rank = std::move(r);
        }
    }
    return *best;
}

} // namespace qpan

#endif // QPAN_EXPPOLY_HPP
