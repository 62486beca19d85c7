#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qpan/continuation.hpp"
#include "qpan/jets.hpp"
#include "qpan/params.hpp"
#include "qpan/solver.hpp"

using complexd = std::complex<double>;
using Params = qpan::EquationParams<double>;
using Options = qpan::ContinuationOptions<double>;

namespace {

void check_close(complexd got, complexd want, double tol) {
    CAPTURE(got.real());
    CAPTURE(got.imag());
    CAPTURE(want.real());
    CAPTURE(want.imag());
    CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
}

// exact jet of f(z) = -1/(B z) at w
qpan::Jet<double> pole_jet(complexd B, complexd w, int depth) {
    qpan::Jet<double> j;
    j.base = w;
    j.d.resize(static_cast<std::size_t>(depth) + 1);
    complexd c = -1.0 / (B * w);
    double fact_sign = 1.0;
    for (int k = 0; k <= depth; ++k) {
        if (k > 0) {
            fact_sign *= -k;
            c /= w;
        }
        j.d[static_cast<std::size_t>(k)] = fact_sign * c;
    }
    return j;
}

} // namespace

TEST_CASE("jets read off derivatives of the stored expansion") {
    // g = -1/z exactly: the origin pole expansion with C = -A/q, D = 0
    Params p{{1.0}, {2.0}, {-2.0}, {}, {0.5}};
    auto g = qpan::solve_laurent_origin(p, 32);
    auto jet = qpan::jet_from_series(g, complexd{2.0}, 2);
    check_close(jet.d[0], complexd{-0.5}, 1e-15);
    check_close(jet.d[1], complexd{0.25}, 1e-15);
    check_close(jet.d[2], complexd{-0.25}, 1e-15);

    // polynomial check at nonzero depth: f = 1 + 3z + 2z^2
    qpan::SolutionSeries<double> poly{
        qpan::TruncatedSeries<double>::taylor(complexd{}, {complexd{1.0},
                                                           complexd{3.0},
                                                           complexd{2.0}}),
        qpan::SeriesVariable::direct, false, 100.0};
    auto pj = qpan::jet_from_series(poly, complexd{1.5}, 2);
    check_close(pj.d[0], complexd{1.0 + 4.5 + 4.5}, 1e-15);
    check_close(pj.d[1], complexd{3.0 + 6.0}, 1e-15);
    check_close(pj.d[2], complexd{4.0}, 1e-15);

    CHECK_THROWS_AS(qpan::jet_from_series(poly, complexd{1.0}, 5),
                    qpan::validation_error);
    qpan::SolutionSeries<double> far = poly;
    far.radius = 1.0;
    CHECK_THROWS_AS(qpan::jet_from_series(far, complexd{2.0}, 1),
                    qpan::validation_error);
}

TEST_CASE("taylor shift and eval agree with closed forms") {
    // polynomial jet of full degree: shifting is exact combinatorics
    auto poly_jet = [](complexd w) {
        // f(z) = 2z^5 - 3z^3 + z - 4 and its derivatives
        qpan::Jet<double> j;
        j.base = w;
        complexd w2 = w * w;
        j.d = {2.0 * w2 * w2 * w - 3.0 * w2 * w + w - 4.0,
               10.0 * w2 * w2 - 9.0 * w2 + 1.0,
               40.0 * w2 * w - 18.0 * w,
               120.0 * w2 - 18.0,
               240.0 * w,
               complexd{240.0}};
        return j;
    };
    complexd w{1.3, -0.4};
    complexd delta{0.7, 0.4};
    auto s = qpan::taylor_shift(poly_jet(w), delta);
    auto want = poly_jet(w + delta);
    check_close(s.base, w + delta, 1e-15);
    for (int k = 0; k <= 5; ++k)
        check_close(s.d[static_cast<std::size_t>(k)],
                    want.d[static_cast<std::size_t>(k)], 1e-12);

    // truncated analytic jet under a small shift: every derivative order
    // stays within the truncation budget of the dropped tail
    auto j = pole_jet(complexd{1.0}, complexd{2.0}, 12);
    auto sp = qpan::taylor_shift(j, complexd{0.015});
    auto wantp = pole_jet(complexd{1.0}, complexd{2.015}, 12);
    for (int k = 0; k <= 6; ++k)
        check_close(sp.d[static_cast<std::size_t>(k)],
                    wantp.d[static_cast<std::size_t>(k)], 1e-10);
    check_close(qpan::taylor_eval(j, complexd{2.2, 0.1}),
                -1.0 / complexd{2.2, 0.1}, 1e-12);
}

TEST_CASE("outward step with |q| > 1 is exact algebra") {
    // f = -1/(Bz) solves the equation when C = -A/q and D = 0
    complexd B{2.0};
    Params p{{1.5}, B, {-0.75}, {}, {2.0}};
    complexd w{0.7, 0.4};
    auto jet = pole_jet(B, w, 6);
    auto out = qpan::continue_step(p, jet);
    CHECK(out.depth() == 5);
    check_close(out.base, p.q * w, 1e-15);
    auto want = pole_jet(B, p.q * w, 5);
    for (int k = 0; k <= 5; ++k)
        check_close(out.d[static_cast<std::size_t>(k)],
                    want.d[static_cast<std::size_t>(k)], 1e-12);
}

TEST_CASE("outward step with |q| < 1 reproduces the pole solution at w/q") {
    complexd B{2.0};
    Params p{{1.0}, B, {-2.0}, {}, {0.5}}; // C = -A/q
    complexd w{0.8, -0.3};
    auto jet = pole_jet(B, w, 10);
    auto out = qpan::continue_step(p, jet);
    CHECK(out.depth() == 9);
    check_close(out.base, w / p.q, 1e-12);
    auto want = pole_jet(B, w / p.q, 9);
    check_close(out.d[0], want.d[0], 1e-9);
    check_close(out.d[1], want.d[1], 1e-8);
    check_close(out.d[2], want.d[2], 1e-7);
}

TEST_CASE("step contract violations are rejected") {
    Params p{{1.0}, {1.0}, {}, {0.5}, {0.5}};
    qpan::Jet<double> j0{complexd{1.0}, {complexd{1.0}}};
    CHECK_THROWS_AS(qpan::continue_step(p, j0), qpan::validation_error);

    qpan::Jet<double> deep{complexd{1.0},
                           std::vector<complexd>(qpan::kJetMaxDepth + 2,
                                                 complexd{1.0})};
    CHECK_THROWS_AS(qpan::continue_step(p, deep), qpan::validation_error);

    Params unit{{1.0}, {1.0}, {}, {0.5}, {0.0, 1.0}}; // |q| = 1
    qpan::Jet<double> j2{complexd{1.0}, {complexd{1.0}, complexd{1.0}}};
    CHECK_THROWS_AS(qpan::continue_step(unit, j2), qpan::validation_error);
}

TEST_CASE("pole proximity guard fires when armed") {
    complexd B{1.0};
    Params p{{1.0}, B, {-2.0}, {}, {0.5}};
    auto jet = pole_jet(B, complexd{1.0}, 8);
    Options opts;
    opts.eps_pole_rel = 0.05;
    opts.known_poles = {complexd{1.4}}; // sits on the outward path to 2.0
    CHECK_THROWS_AS(qpan::continue_step(p, jet, opts), qpan::numerical_error);
    // a pole elsewhere does not interfere
    opts.known_poles = {complexd{-5.0}};
    CHECK_NOTHROW(qpan::continue_step(p, jet, opts));
}

TEST_CASE("continued evaluation agrees with a longer direct expansion, |q| < 1") {
    Params p{{1.0}, {1.0}, {0.3}, {0.7}, {0.5}};
    auto sol = qpan::solve_entire(p, complexd{}, 64);
    auto oracle = qpan::solve_entire(p, complexd{}, 256);
    REQUIRE(std::isfinite(sol.radius));
    double r0 = sol.radius;
    // The estimator radius r0 halves the coefficient-ratio radius, so the
    // band (r0, 1.5 r0] is outside the declared disc yet far enough inside
    // the longer expansion's convergence for it to serve as an oracle.
    for (int k : {1, 2}) {
        for (int i = 0; i < 8; ++i) {
            double mod = r0 * (1.05 + 0.45 * i / 7.0);
            complexd z = std::polar(mod, 0.35 + 0.7 * i);
            complexd got = qpan::evaluate_continued(p, sol, z, k);
            complexd want = evaluate(oracle.series, z);
            check_close(got, want, 1e-8);
        }
    }
}

TEST_CASE("adjacent step counts agree on the overlap, |q| < 1") {
    Params p{{0.9, 0.1}, {1.1}, {0.2, -0.1}, {0.5, 0.2}, {0.45}};
    auto sol = qpan::solve_entire(p, complexd{0.1, 0.05}, 64);
    double r0 = sol.radius;
    for (int i = 0; i < 6; ++i) {
        complexd z = std::polar(r0 * 1.5, 0.2 + 1.0 * i);
        complexd v1 = qpan::evaluate_continued(p, sol, z, 1);
        complexd v2 = qpan::evaluate_continued(p, sol, z, 2);
        check_close(v1, v2, 1e-8);
    }
}

TEST_CASE("continued evaluation matches a terminating expansion, |q| > 1") {
    // g = -1/z + b0 solves the normalized equation exactly when
    // b0 = -(A/q + C)/2 and B D = -(A + C + b0) b0; here b0 = -0.4 and the
    // origin expansion terminates after two terms.
    Params p{{1.0}, {2.0}, {0.3}, {0.18}, {2.0}};
    auto g = qpan::solve_laurent_origin(p, 64);
    REQUIRE(std::isinf(g.radius));
    check_close(g.series.coeff(-1), complexd{-1.0}, 1e-15);
    check_close(g.series.coeff(0), complexd{-0.4}, 1e-15);
    bool tail_zero = true;
    for (int n = 1; n <= g.series.order(); ++n)
        tail_zero = tail_zero && g.series.coeff(n) == complexd{};
    CHECK(tail_zero);

    g.radius = 0.8; // force genuine walking
    for (int k : {1, 2, 3}) {
        for (int i = 0; i < 4; ++i) {
            double mod = 0.8 * 0.9 * std::pow(2.0, k);
            complexd z = std::polar(mod, 0.4 + 1.3 * i);
            complexd got = qpan::evaluate_continued(p, g, z, k);
            check_close(got, -1.0 / z - 0.4, 1e-12);
        }
    }
}

TEST_CASE("pole solution continues exactly far outside the base disc") {
    // g = -1/z with a finite declared radius imposed, stepped outward
    Params p{{1.0}, {2.0}, {-0.5}, {}, {2.0}}; // C = -A/q for q = 2
    auto g = qpan::solve_laurent_origin(p, 64);
    REQUIRE(std::isinf(g.radius)); // terminating tail
    g.radius = 1.0;                // force genuine continuation
    complexd z{9.0, 3.0};          // |z| ~ 9.5, needs k = 4 at |q| = 2
    complexd got = qpan::evaluate_continued(p, g, z, 4);
    check_close(got, -1.0 / z, 1e-9);

    // the normalized-variable value rescales to the direct solution
    complexd f = got / p.B;
    check_close(f, -1.0 / (p.B * z), 1e-9);
}

TEST_CASE("reachability preconditions") {
    Params p{{1.0}, {1.0}, {0.3}, {0.7}, {0.5}};
    auto sol = qpan::solve_entire(p, complexd{}, 64);
    double r0 = sol.radius;
    CHECK_THROWS_AS(qpan::evaluate_continued(p, sol, complexd{r0 * 3.0}, 1),
                    qpan::validation_error);
    CHECK_THROWS_AS(qpan::evaluate_continued(p, sol, complexd{r0 * 0.5}, 17),
                    qpan::validation_error);
    CHECK_NOTHROW(qpan::evaluate_continued(p, sol, complexd{r0 * 0.5}, 0));
    CHECK_THROWS_AS(qpan::evaluate_continued(p, sol, complexd{r0 * 1.5}, 0),
                    qpan::validation_error);
}

TEST_CASE("formal expansions refuse continuation") {
    Params p{{1.0}, {1.0}, {}, {}, {0.5}};
    auto formal = qpan::solve_laurent_at(p, complexd{2.0}, complexd{1.0}, 32);
    CHECK_THROWS_AS(
        qpan::evaluate_continued(p, formal, complexd{3.0}, 1),
        qpan::formal_series_error);
}

TEST_CASE("reachable radius grows geometrically") {
    CHECK(qpan::continued_radius(1.0, complexd{0.5}, 3) == doctest::Approx(8.0));
    CHECK(qpan::continued_radius(2.0, complexd{3.0}, 2) == doctest::Approx(18.0));
    CHECK_THROWS_AS(qpan::continued_radius(1.0, complexd{0.0, 1.0}, 1),
                    qpan::validation_error);
}
