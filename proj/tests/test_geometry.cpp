#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mskflow/geometry.hpp"
#include "mskflow/shapes.hpp"

using namespace msk;

namespace {

PolygonalCurve unit_square() {
    PolygonalCurve c;
    c.closed = true;
    c.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    return c;
}

PolygonalCurve bumpy_star(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(0.05, 0.12);
    double a3 = amp(rng), a5 = amp(rng), phase = amp(rng) * 40.0;
    PolygonalCurve c;
    c.closed = true;
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * M_PI * k / n;
        double r = 1.0 + a3 * std::cos(3.0 * th + phase) + a5 * std::sin(5.0 * th);
        c.vertices.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return c;
}

}  // namespace

TEST_CASE("edge frames of the unit square") {
    auto frames = edge_frames(unit_square());
    REQUIRE(frames.size() == 4);
    for (const auto& f : frames) CHECK(f.r == doctest::Approx(1.0));
    // First edge runs from the last vertex (0,1) down to (0,0).
    CHECK(frames[0].t.x == doctest::Approx(0.0));
    CHECK(frames[0].t.y == doctest::Approx(-1.0));
    CHECK(frames[0].n.x == doctest::Approx(-1.0));
    CHECK(frames[0].n.y == doctest::Approx(0.0));
    CHECK(frames[0].midpoint.x == doctest::Approx(0.0));
    CHECK(frames[0].midpoint.y == doctest::Approx(0.5));
}

TEST_CASE("edge frame of an open segment") {
    PolygonalCurve c;
    c.closed = false;
    c.vertices = {{0, 0}, {2, 0}};
    auto frames = edge_frames(c);
    REQUIRE(frames.size() == 1);
    CHECK(frames[0].r == doctest::Approx(2.0));
    CHECK(frames[0].t.x == doctest::Approx(1.0));
    CHECK(frames[0].n.y == doctest::Approx(-1.0));
    CHECK(frames[0].midpoint.x == doctest::Approx(1.0));
}

TEST_CASE("duplicate consecutive vertex raises a degenerate-edge error") {
    PolygonalCurve c;
    c.closed = true;
    c.vertices = {{0, 0}, {1, 0}, {1, 0}, {0, 1}};
    CHECK_THROWS_AS(edge_frames(c), DegenerateEdgeError);
    CHECK_THROWS_AS(validate_curve(c), DegenerateEdgeError);
}

TEST_CASE("unit vectors and orthogonality of frames") {
    auto frames = edge_frames(bumpy_star(40, 7));
    for (const auto& f : frames) {
        CHECK(std::fabs(f.t.norm() - 1.0) < 1e-12);
        CHECK(std::fabs(f.n.dot(f.t)) < 1e-12);
    }
}

TEST_CASE("outer angles of the square are pi/2") {
    auto phi = outer_angles(unit_square());
    for (double p : phi) CHECK(p == doctest::Approx(M_PI / 2));
}

TEST_CASE("collinear middle vertex has zero outer angle") {
    PolygonalCurve c;
    c.closed = true;
    c.vertices = {{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto phi = outer_angles(c);
    CHECK(phi[1] == 0.0);  // at (0.5, 0), exact-zero sign branch
}

TEST_CASE("regular polygon outer angles and the exterior-angle sum") {
    for (int n : {5, 16, 60}) {
        auto phi = outer_angles(regular_polygon(n, 1.0));
        double sum = 0.0;
        for (double p : phi) {
            CHECK(p == doctest::Approx(2.0 * M_PI / n).epsilon(1e-12));
            sum += p;
        }
        CHECK(std::fabs(sum - 2.0 * M_PI) < 1e-9);
    }
}

TEST_CASE("exterior-angle sum holds for every closed generator shape") {
    for (const char* shape :
         {"circle", "star", "tube:length=8,thickness=1", "dumbbell:r=3,l=1.5,b=0.4"}) {
        auto curves = generate_shape(shape, 96);
        for (const auto& c : curves) {
            double sum = 0.0;
            for (double p : outer_angles(c)) sum += p;
            CHECK(std::fabs(sum - 2.0 * M_PI) < 1e-9);
        }
    }
}

TEST_CASE("discrete curvature of the unit square is 2") {
    for (double k : discrete_curvature(unit_square())) CHECK(k == doctest::Approx(2.0));
}

TEST_CASE("discrete curvature of a regular hexagon matches the closed form") {
    // 1 / (r cos(pi/N)) for circumradius r = 1, N = 6.
    auto kappa = discrete_curvature(regular_polygon(6, 1.0));
    for (double k : kappa) CHECK(k == doctest::Approx(1.1547005383792515).epsilon(1e-12));
}

TEST_CASE("edge flanked by a collinear vertex keeps only one angle term") {
    PolygonalCurve c;
    c.closed = true;
    c.vertices = {{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto kappa = discrete_curvature(c);
    // Edge (0.5,0) -> (1,0): tan vanishes at the flat start vertex, the end
    // vertex turns pi/2, so kappa = tan(pi/4) / 0.5.
    CHECK(kappa[2] == doctest::Approx(2.0));
    CHECK(kappa[1] == doctest::Approx(2.0));
}

TEST_CASE("regular polygon curvature converges to 1/r at second order") {
    double r = 2.0;
    auto err = [&](int n) {
        return std::fabs(discrete_curvature(regular_polygon(n, r))[0] - 1.0 / r);
    };
    CHECK(err(20) / err(40) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("vertex frames of the square point along the diagonals") {
    auto vf = vertex_frames(unit_square());
    // Vertex index 2 is (1,1); its normal bisects the two adjacent edge normals.
    CHECK(vf[2].N.x == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(vf[2].N.y == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(vf[2].phi == doctest::Approx(M_PI / 2));
}

TEST_CASE("vertex frame at a collinear vertex reduces to the edge frame") {
    PolygonalCurve c;
    c.closed = true;
    c.vertices = {{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto frames = edge_frames(c);
    auto vf = vertex_frames(c);
    CHECK((vf[1].N - frames[1].n).norm() < 1e-15);
    CHECK((vf[1].T - frames[1].t).norm() < 1e-15);
}

TEST_CASE("regular polygon vertex normals are radial") {
    int n = 12;
    PolygonalCurve c = regular_polygon(n, 1.5);
    auto vf = vertex_frames(c);
    for (int k = 0; k < n; ++k) {
        Point2 radial = c.vertices[static_cast<std::size_t>(k)] /
                        c.vertices[static_cast<std::size_t>(k)].norm();
        CHECK((vf[static_cast<std::size_t>(k)].N - radial).norm() < 1e-12);
    }
}

TEST_CASE("rotation identities of the vertex frames") {
    PolygonalCurve c = bumpy_star(50, 11);
    auto frames = edge_frames(c);
    auto vf = vertex_frames(c);
    int n = c.size();
    for (int k = 0; k < n; ++k) {
        const auto& in = frames[static_cast<std::size_t>(k)];
        const auto& out = frames[static_cast<std::size_t>((k + 1) % n)];
        const auto& v = vf[static_cast<std::size_t>(k)];
        CHECK((v.T - (v.cos_half * in.t - v.sin_half * in.n)).norm() < 1e-12);
        CHECK((v.N - (v.cos_half * in.n + v.sin_half * in.t)).norm() < 1e-12);
        CHECK((v.T - (v.cos_half * out.t + v.sin_half * out.n)).norm() < 1e-12);
        CHECK((v.N - (v.cos_half * out.n - v.sin_half * out.t)).norm() < 1e-12);
    }
}

TEST_CASE("length and signed area") {
    PolygonalCurve sq = unit_square();
    CHECK(length(sq) == doctest::Approx(4.0));
    CHECK(area(sq) == doctest::Approx(1.0));

    PolygonalCurve cw = sq;
    std::reverse(cw.vertices.begin(), cw.vertices.end());
    CHECK(area(cw) == doctest::Approx(-1.0));

    int n = 16;
    double r = 1.3;
    CHECK(area(regular_polygon(n, r)) ==
          doctest::Approx(0.5 * n * r * r * std::sin(2.0 * M_PI / n)).epsilon(1e-12));

    PolygonalCurve open;
    open.closed = false;
    open.vertices = {{0, 0}, {1, 0}, {1, 1}};
    CHECK(length(open) == doctest::Approx(2.0));
    CHECK_THROWS_AS(area(open), UnsupportedOperationError);
}

TEST_CASE("rigid motions leave the discrete geometry invariant") {
    PolygonalCurve c = bumpy_star(30, 3);
    auto kappa0 = discrete_curvature(c);
    auto phi0 = outer_angles(c);
    double L0 = length(c), A0 = area(c);

    double ang = 0.7;
    Point2 shift{3.25, -1.5};
    PolygonalCurve moved = c;
    for (Point2& p : moved.vertices) {
        Point2 q{p.x * std::cos(ang) - p.y * std::sin(ang),
                 p.x * std::sin(ang) + p.y * std::cos(ang)};
        p = q + shift;
    }
    auto kappa1 = discrete_curvature(moved);
    auto phi1 = outer_angles(moved);
    for (std::size_t i = 0; i < kappa0.size(); ++i) {
        CHECK(std::fabs(kappa0[i] - kappa1[i]) < 1e-12);
        CHECK(std::fabs(phi0[i] - phi1[i]) < 1e-12);
    }
    CHECK(std::fabs(length(moved) - L0) < 1e-12);
    CHECK(std::fabs(area(moved) - A0) < 1e-12);

    double s = 2.5;
    PolygonalCurve scaled = c;
    for (Point2& p : scaled.vertices) p = p * s;
    auto kappa2 = discrete_curvature(scaled);
    for (std::size_t i = 0; i < kappa0.size(); ++i) {
        CHECK(kappa2[i] == doctest::Approx(kappa0[i] / s).epsilon(1e-12));
    }
    CHECK(length(scaled) == doctest::Approx(s * L0).epsilon(1e-12));
    CHECK(area(scaled) == doctest::Approx(s * s * A0).epsilon(1e-12));
}

TEST_CASE("near-cusp turning angle raises a sharp-angle error") {
    // Sliver triangle: the tangents at (2,0) are nearly antiparallel.
    PolygonalCurve c;
    c.closed = true;
    c.vertices = {{0, 0}, {2, 0}, {1, 1e-9}};
    CHECK_THROWS_AS(discrete_curvature(c), SharpAngleError);
    CHECK_THROWS_AS(vertex_frames(c), SharpAngleError);
    CHECK_NOTHROW(outer_angles(c));  // angles themselves are still defined
}

TEST_CASE("self-intersecting curve is rejected on construction") {
    PolygonalCurve bowtie;
    bowtie.closed = true;
    bowtie.vertices = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK(!is_simple(bowtie));
    CHECK_THROWS_AS(validate_curve(bowtie), InvalidCurveError);
    CHECK(is_simple(unit_square()));
}

TEST_CASE("winding number classifies interior and exterior") {
    PolygonalCurve sq = unit_square();
    CHECK(winding_number(sq, {0.5, 0.5}) == 1);
    CHECK(winding_number(sq, {1.5, 0.5}) == 0);
    PolygonalCurve cw = sq;
    std::reverse(cw.vertices.begin(), cw.vertices.end());
    CHECK(winding_number(cw, {0.5, 0.5}) == -1);
}
