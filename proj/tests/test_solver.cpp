#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "qpan/params.hpp"
#include "qpan/series.hpp"
#include "qpan/solver.hpp"

using complexd = std::complex<double>;
using Params = qpan::EquationParams<double>;

namespace {

void check_close(complexd got, complexd want, double tol = 1e-13) {
    CAPTURE(got.real());
    CAPTURE(got.imag());
    CAPTURE(want.real());
    CAPTURE(want.imag());
    CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
}

} // namespace

TEST_CASE("parameter validation") {
    Params ok{{1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.5, 0.0}};
    CHECK_NOTHROW(ok.validate());
    CHECK_THROWS_AS((Params{{}, {1.0}, {}, {}, {0.5}}.validate()),
                    qpan::validation_error);
    CHECK_THROWS_AS((Params{{1.0}, {1.0}, {}, {}, {}}.validate()),
                    qpan::validation_error);
    CHECK_THROWS_AS((Params{{1.0}, {1.0}, {}, {}, {1.0}}.validate()),
                    qpan::validation_error);
    CHECK_NOTHROW((Params{{1.0}, {1.0}, {}, {}, {-1.0}}.validate()));
    CHECK_THROWS_AS((Params{{1.0}, {1.0}, {}, {}, {-1.0}}.require_q_not_minus_one()),
                    qpan::validation_error);
}

TEST_CASE("quadratic power series: pinned coefficients") {
    // A=1, B=1, C=0, D=0, q=1/2, f(0)=1; rational oracle gives
    // 1, 2, 5/2, 77/24, 3229/768
    Params p{{1.0}, {1.0}, {}, {}, {0.5}};
    auto sol = qpan::solve_entire(p, complexd{1.0}, 8);
    CHECK(sol.series.low() == 0);
    CHECK(sol.variable == qpan::SeriesVariable::direct);
    CHECK_FALSE(sol.formal);
    CHECK(sol.series.coeff(0) == complexd{1.0});
    CHECK(sol.series.coeff(1) == complexd{2.0});
    CHECK(sol.series.coeff(2) == complexd{2.5});
    check_close(sol.series.coeff(3), complexd{77.0 / 24.0}, 1e-15);
    check_close(sol.series.coeff(4), complexd{3229.0 / 768.0}, 1e-15);
}

TEST_CASE("quadratic power series: generic pinned coefficients") {
    // A=5/4, B=1/2, C=-1/4, D=3/4, q=1/2, f(0)=3/5; rational oracle values
    Params p{{1.25}, {0.5}, {-0.25}, {0.75}, {0.5}};
    auto sol = qpan::solve_entire(p, complexd{0.6}, 6);
    const double want[] = {0.6, 1.53, 0.745875, 0.5548640625,
                           0.35552217041015627, 0.25586294052886965};
    for (int n = 0; n <= 5; ++n)
        check_close(sol.series.coeff(n), complexd{want[n]}, 1e-14);
}

TEST_CASE("normalized view agrees with solving the normalized equation") {
    Params p{{1.1, 0.3}, {0.7, -0.2}, {-0.4, 0.1}, {0.9, 0.5}, {0.45, 0.2}};
    complexd f0{0.6, -0.3};
    auto direct = qpan::solve_entire(p, f0, 48);
    auto viewed = qpan::to_normalized_view(direct, p);
    auto renorm = qpan::solve_entire(p.normalized(), p.B * f0, 48);
    for (int n = 0; n <= 48; ++n)
        check_close(viewed.series.coeff(n), renorm.series.coeff(n), 1e-12);
    auto round = qpan::to_direct_view(viewed, p);
    for (int n = 0; n <= 48; ++n)
        check_close(round.series.coeff(n), direct.series.coeff(n), 1e-13);
}

TEST_CASE("pointwise equation residual is small inside the safe disc") {
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&](double lo, double hi) {
        double mod = lo + (hi - lo) * u(rng);
        double arg = 2.0 * M_PI * u(rng);
        return std::polar(mod, arg);
    };
    for (int rep = 0; rep < 10; ++rep) {
        Params p{draw(0.5, 2.0), draw(0.2, 1.4), draw(0.5, 2.0), draw(0.2, 1.4),
                 draw(0.15, 0.85)};
        complexd f0 = draw(0.0, 1.0) / p.B;
        auto sol = qpan::solve_entire(p, f0, 64);
        double rho = 0.25 / (std::abs(p.A) + std::abs(p.C) + 1.0);
        for (int i = 0; i < 12; ++i) {
            complexd z = std::polar(rho * (0.2 + 0.8 * u(rng)), 2.0 * M_PI * u(rng));
            CHECK(std::abs(qpan::ode_residual(p, sol, z)) < 1e-9);
        }
    }
}

TEST_CASE("linear power series: pinned coefficients and independent oracle") {
    // A=1, C=0, D=0, q=1/2, a0=1: 1, 1, 1/4, 1/48, 1/1536, 1/122880
    Params p{{1.0}, {}, {}, {}, {0.5}};
    auto sol = qpan::solve_linear(p, complexd{1.0}, 6);
    CHECK(sol.series.coeff(1) == complexd{1.0});
    CHECK(sol.series.coeff(2) == complexd{0.25});
    check_close(sol.series.coeff(3), complexd{1.0 / 48.0}, 1e-15);
    check_close(sol.series.coeff(4), complexd{1.0 / 1536.0}, 1e-15);
    check_close(sol.series.coeff(5), complexd{1.0 / 122880.0}, 1e-15);

    // independent product-form oracle a_{n+1} = a_n (A q^n + C)/(n+1)
    Params g{{0.8, 0.4}, {}, {0.3, -0.2}, {0.1, 0.7}, {0.6, 0.1}};
    complexd a0{0.9, -0.5};
    auto s = qpan::solve_linear(g, a0, 40);
    complexd an = (g.A + g.C) * a0 + g.D;
    complexd qn = g.q;
    check_close(s.series.coeff(1), an, 1e-14);
    for (int n = 1; n < 40; ++n) {
        an *= (g.A * qn + g.C) / double(n + 1);
        qn *= g.q;
        check_close(s.series.coeff(n + 1), an, 1e-13);
    }

    CHECK_THROWS_AS(qpan::solve_linear(Params{{1.0}, {1.0}, {}, {}, {0.5}},
                                       complexd{1.0}, 8),
                    qpan::validation_error);
}

TEST_CASE("solve_entire degenerates to solve_linear when B = 0") {
    Params p{{1.2, -0.1}, {}, {0.4, 0.2}, {0.3}, {0.7, 0.1}};
    auto a = qpan::solve_entire(p, complexd{0.5, 0.5}, 32);
    auto b = qpan::solve_linear(p, complexd{0.5, 0.5}, 32);
    for (int n = 0; n <= 32; ++n)
        CHECK(a.series.coeff(n) == b.series.coeff(n));
}

TEST_CASE("constant solution of the linear equation") {
    Params p{{2.0}, {}, {1.0}, {-6.0}, {0.5}};
    auto c = qpan::linear_constant_solution(p);
    CHECK(c == complexd{2.0});
    check_close(p.A * c + p.C * c + p.D, complexd{}, 1e-15);

    Params deg{{1.0}, {}, {-1.0}, {3.0}, {0.5}};
    CHECK_THROWS_WITH_AS(qpan::linear_constant_solution(deg),
                         doctest::Contains("degenerate"),
                         qpan::validation_error);
    Params quad{{1.0}, {1.0}, {}, {}, {0.5}};
    CHECK_THROWS_AS(qpan::linear_constant_solution(quad), qpan::validation_error);
}

TEST_CASE("forced solution at the origin") {
    Params p{{1.0, 0.2}, {0.8}, {0.3}, {0.7, -0.4}, {0.5}};
    auto forced = qpan::check_forced_uniqueness(p, 32);
    auto direct = qpan::solve_entire(p, complexd{}, 32);
    CHECK(forced.series.coeff(0) == complexd{});
    CHECK(forced.series.coeff(1) == p.D);
    for (int n = 0; n <= 32; ++n)
        CHECK(forced.series.coeff(n) == direct.series.coeff(n));

    Params d0{{1.0}, {1.0}, {}, {}, {0.5}};
    CHECK_THROWS_AS(qpan::check_forced_uniqueness(d0, 8), qpan::validation_error);
    Params qm1{{1.0}, {1.0}, {}, {0.5}, {-1.0}};
    CHECK_THROWS_AS(qpan::check_forced_uniqueness(qm1, 8), qpan::validation_error);
}

TEST_CASE("distinct seeds give distinct members of the family") {
    Params p{{1.0}, {0.5}, {0.2}, {0.1}, {0.5}};
    auto fam = qpan::enumerate_family(
        p, {complexd{}, complexd{0.5}, complexd{0.5, 0.5}}, 16);
    REQUIRE(fam.size() == 3);
    CHECK(fam[0].series.coeff(0) != fam[1].series.coeff(0));
    CHECK(fam[1].series.coeff(0) != fam[2].series.coeff(0));
}

TEST_CASE("pole expansion at the origin: pinned coefficients") {
    // A=1, C=1/2, q=1/2, B=2, D=3; rational oracle gives
    // b_{-1}=-1, b0=-5/4, b1=91/48, b2=-91/128, b3=4459/4608
    Params p{{1.0}, {2.0}, {0.5}, {3.0}, {0.5}};
    auto sol = qpan::solve_laurent_origin(p, 8);
    CHECK(sol.variable == qpan::SeriesVariable::normalized);
    CHECK_FALSE(sol.formal);
    CHECK(sol.series.low() == -1);
    CHECK(sol.series.coeff(-1) == complexd{-1.0});
    CHECK(sol.series.coeff(0) == complexd{-1.25});
    check_close(sol.series.coeff(1), complexd{91.0 / 48.0}, 1e-15);
    check_close(sol.series.coeff(2), complexd{-91.0 / 128.0}, 1e-15);
    check_close(sol.series.coeff(3), complexd{4459.0 / 4608.0}, 1e-15);

    CHECK_THROWS_AS(
        qpan::solve_laurent_origin(Params{{1.0}, {}, {}, {}, {0.5}}, 8),
        qpan::validation_error);
    CHECK_THROWS_AS(
        qpan::solve_laurent_origin(Params{{1.0}, {1.0}, {}, {}, {-1.0}}, 8),
        qpan::validation_error);
}

TEST_CASE("pole expansion at the origin: constant term drops when C = -A/q") {
    // then b0 = 0 and b1 = B*D/3; with D = 0 the whole tail is exact zeros
    Params p{{1.0}, {2.0}, {-2.0}, {3.0}, {0.5}};
    auto sol = qpan::solve_laurent_origin(p, 8);
    CHECK(sol.series.coeff(0) == complexd{});
    CHECK(sol.series.coeff(1) == complexd{2.0});
    check_close(sol.series.coeff(2), complexd{-0.75}, 1e-15);
    check_close(sol.series.coeff(3), complexd{17.0 / 16.0}, 1e-15);

    Params h{{1.0}, {2.0}, {-2.0}, {}, {0.5}};
    auto bare = qpan::solve_laurent_origin(h, 32);
    CHECK(bare.series.coeff(-1) == complexd{-1.0});
    for (int n = 0; n <= 32; ++n) CHECK(bare.series.coeff(n) == complexd{});
    // and the radius of a terminating expansion is unbounded
    CHECK(std::isinf(bare.radius));
}

TEST_CASE("pole expansion at the origin satisfies the normalized equation") {
    Params p{{0.9, 0.3}, {1.4, -0.2}, {0.5, 0.1}, {0.8, 0.6}, {0.4, 0.1}};
    auto sol = qpan::solve_laurent_origin(p, 64);
    double rb = 0.1 / (2.0 * (std::abs(p.A) + std::abs(p.C) + 1.0));
    for (int i = 0; i < 8; ++i) {
        complexd z = std::polar(rb, 2.0 * M_PI * i / 8.0 + 0.1);
        complexd r = qpan::ode_residual(p, sol, z);
        complexd g = evaluate(sol.series, z);
        CHECK(std::abs(r) <= 1e-11 * std::max(1.0, std::norm(g)));
    }
}

TEST_CASE("pole expansion at a nonzero center: pinned coefficients") {
    // A=1, C=0, q=1/2, b0=1: b1=2/3, b2=5/12, b3=199/720, b4=6583/34560
    Params p{{1.0}, {1.0}, {}, {}, {0.5}};
    complexd z0{2.0};
    auto sol = qpan::solve_laurent_at(p, z0, complexd{1.0}, 8);
    CHECK(sol.formal);
    CHECK(sol.series.center() == z0);
    CHECK(sol.series.coeff(-1) == complexd{-1.0});
    CHECK(sol.series.coeff(0) == complexd{1.0});
    check_close(sol.series.coeff(1), complexd{2.0 / 3.0}, 1e-15);
    check_close(sol.series.coeff(2), complexd{5.0 / 12.0}, 1e-15);
    check_close(sol.series.coeff(3), complexd{199.0 / 720.0}, 1e-15);
    check_close(sol.series.coeff(4), complexd{6583.0 / 34560.0}, 1e-15);

    CHECK_THROWS_AS(qpan::solve_laurent_at(p, complexd{}, complexd{1.0}, 8),
                    qpan::validation_error);
    CHECK_THROWS_AS(qpan::ode_residual(p, sol, complexd{3.0}),
                    qpan::formal_series_error);
}

TEST_CASE("pole expansion at a nonzero center: closed-form seeds kill the tail") {
    // b0 = 0 leaves the bare pole; b0 = -(A+C) reproduces the constant-shift
    // closed form, i.e. f = -1/(B(z-z0)) + s0 in the direct variable.
    Params p{{1.0}, {2.0}, {-3.0}, {0.4}, {0.5}};
    auto bare = qpan::solve_laurent_at(p, complexd{1.5}, complexd{}, 16);
    for (int n = 0; n <= 16; ++n) CHECK(bare.series.coeff(n) == complexd{});

    auto shifted = qpan::solve_laurent_at(p, complexd{1.5}, -(p.A + p.C), 16);
    CHECK(shifted.series.coeff(0) == complexd{2.0});
    for (int n = 1; n <= 16; ++n) CHECK(shifted.series.coeff(n) == complexd{});
    auto f = qpan::to_direct_view(shifted, p);
    CHECK(f.series.coeff(-1) == complexd{-0.5}); // -1/B
    CHECK(f.series.coeff(0) == complexd{1.0});   // s0 = -(A+C)/B
}

TEST_CASE("radius estimation from the coefficient tail") {
    // geometric coefficients 2^n have root-test limit 2: radius 0.25
    std::vector<complexd> c(33);
    for (int n = 0; n <= 32; ++n) c[n] = complexd{std::ldexp(1.0, n)};
    auto s = qpan::TruncatedSeries<double>::taylor(complexd{}, std::move(c));
    CHECK(qpan::estimate_radius(s) == doctest::Approx(0.25).epsilon(1e-12));

    auto z = qpan::TruncatedSeries<double>::zero(complexd{}, 32);
    CHECK(std::isinf(qpan::estimate_radius(z)));
}

TEST_CASE("underflow is flushed to exact zero") {
    Params p{{1.0}, {}, {}, {}, {0.5}};
    auto sol = qpan::solve_linear(p, complexd{1.0}, 80);
    CHECK(sol.series.coeff(80) == complexd{});
    bool hit_zero = false;
    for (int n = 1; n <= 80; ++n) {
        complexd c = sol.series.coeff(n);
        CHECK(std::isfinite(c.real()));
        if (c == complexd{}) hit_zero = true;
    }
    CHECK(hit_zero);
}

TEST_CASE("log-space root test matches the direct computation where finite") {
    Params p{{1.0}, {}, {}, {}, {2.0}};
    auto sol = qpan::solve_linear(p, complexd{1.0}, 20);
    double direct = std::pow(std::abs(sol.series.coeff(20)), 1.0 / 20.0);
    double logged = qpan::linear_root_test_estimate(p, complexd{1.0}, 20);
    CHECK(logged == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("log-space root test resolves the growth dichotomy at n = 60") {
    Params inside{{1.0}, {}, {}, {}, {0.5}};
    Params outside{{1.0}, {}, {}, {}, {2.0}};
    double small = qpan::linear_root_test_estimate(inside, complexd{1.0}, 60);
    double big = qpan::linear_root_test_estimate(outside, complexd{1.0}, 60);
    CHECK(small < 1e-3);
    CHECK(big > 1e2);
}

TEST_CASE("normalized-variable growth bounds hold for sampled parameters") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&](double lo, double hi) {
        return std::polar(lo + (hi - lo) * u(rng), 2.0 * M_PI * u(rng));
    };
    for (int rep = 0; rep < 8; ++rep) {
        // D = 0, |a0| <= 1: |a_n| <= (|A|+|C|+1)^n
        Params p{draw(0.1, 2.0), {1.0}, draw(0.0, 2.0), {}, draw(0.05, 0.95)};
        complexd a0 = draw(0.05, 1.0);
        auto sol = qpan::solve_entire(p, a0, 60);
        double base = std::abs(p.A) + std::abs(p.C) + 1.0;
        for (int n = 0; n <= 60; ++n)
            CHECK(std::abs(sol.series.coeff(n)) <= std::pow(base, n) * (1.0 + 1e-12));
    }
}
