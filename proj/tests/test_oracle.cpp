#include <doctest.h>

#include <cmath>

#include "mskflow/mfs.hpp"
#include "mskflow/oracle.hpp"

using namespace msk;

TEST_CASE("annulus potential takes the boundary values and stays continuous") {
    AnnulusState s{1.0, 3.0};
    CHECK(annulus_potential(s, {1.0, 0.0}) == doctest::Approx(-1.0));
    CHECK(annulus_potential(s, {0.0, 3.0}) == doctest::Approx(1.0 / 3.0));
    CHECK(annulus_potential(s, {5.0, 0.0}) == doctest::Approx(1.0 / 3.0));
    CHECK(annulus_potential(s, {0.2, 0.0}) == doctest::Approx(-1.0));

    // Branch values agree across both circles.
    for (double r : {1.0, 3.0}) {
        double inside = annulus_potential(s, {r - 1e-13, 0.0});
        double outside = annulus_potential(s, {r + 1e-13, 0.0});
        CHECK(std::fabs(inside - outside) < 1e-11);
    }
}

TEST_CASE("annulus speeds at R1=1, R2=3") {
    AnnulusState s{1.0, 3.0};
    auto [d1, d2] = annulus_speeds(s);
    // (1/R1 + 1/R2) / log(R2/R1) = (4/3)/log 3, divided by R1 resp. R2.
    CHECK(d1 == doctest::Approx(-1.213653).epsilon(1e-6));
    CHECK(d2 == doctest::Approx(-0.404551).epsilon(1e-6));
}

TEST_CASE("annulus speeds diverge as the circles approach") {
    double prev = 0.0;
    for (double eps : {1e-1, 1e-3, 1e-6}) {
        AnnulusState s{2.0 * (1.0 - eps), 2.0};
        auto [d1, d2] = annulus_speeds(s);
        CHECK(std::fabs(d1) > prev);
        prev = std::fabs(d1);
    }
    CHECK(prev > 1e5);
}

TEST_CASE("annulus speeds conserve the ring area exactly") {
    for (double r2 : {1.5, 3.0, 10.0}) {
        AnnulusState s{1.0, r2};
        auto [d1, d2] = annulus_speeds(s);
        CHECK(std::fabs(s.R2 * d2 - s.R1 * d1) < 1e-14);
    }
}

TEST_CASE("annulus trajectory vanishes between t=0.30 and t=0.40") {
    AnnulusState s{1.0, 3.0};
    auto traj = annulus_trajectory(s, 1e-5, 1.0);
    CHECK(traj.vanished);
    CHECK(traj.vanish_time > 0.30);
    CHECK(traj.vanish_time < 0.40);
}

TEST_CASE("annulus trajectory is first order in dt") {
    AnnulusState s{1.0, 3.0};
    double t_probe = 0.2;
    auto value_at = [&](double dt) {
        auto traj = annulus_trajectory(s, dt, t_probe + dt);
        return traj.samples[static_cast<std::size_t>(std::lround(t_probe / dt))].R1;
    };
    double ref = value_at(1e-6);
    double e1 = std::fabs(value_at(4e-4) - ref);
    double e2 = std::fabs(value_at(2e-4) - ref);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("ring area is conserved along the trajectory to O(dt)") {
    AnnulusState s{1.0, 3.0};
    double dt = 1e-5;
    auto traj = annulus_trajectory(s, dt, 0.25);
    double a0 = M_PI * (s.R2 * s.R2 - s.R1 * s.R1);
    for (const auto& sample : traj.samples) {
        double a = M_PI * (sample.R2 * sample.R2 - sample.R1 * sample.R1);
        CHECK(std::fabs(a - a0) / a0 < 50.0 * dt);
    }
}

TEST_CASE("harmonic residual of the log kernel is O(h^2)") {
    Point2 y{0.3, -0.2};
    auto u = [y](Point2 x) { return fundamental_solution(x - y); };
    double res = harmonic_residual(u, {1.3, -0.2}, 1e-3);  // unit distance from y
    CHECK(std::fabs(res) < 1e-4);
}

TEST_CASE("harmonic residual of an affine function vanishes") {
    auto u = [](Point2 x) { return 2.0 * x.x - 3.0 * x.y + 0.5; };
    CHECK(std::fabs(harmonic_residual(u, {0.4, 0.7}, 1e-3)) < 1e-9);
}

TEST_CASE("stencil through a singular point raises a stencil error") {
    Point2 y{1.0, 0.0};
    auto u = [y](Point2 x) { return fundamental_solution(x - y); };
    CHECK_THROWS_AS(harmonic_residual(u, {1.0 - 1e-3, 0.0}, 1e-3), StencilError);
}
