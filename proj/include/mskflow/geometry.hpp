#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mskflow/errors.hpp"

namespace msk {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double x, double y) : x(x), y(y) {}

    Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    Point2 operator/(double s) const { return {x / s, y / s}; }
    Point2& operator+=(Point2 o) { x += o.x; y += o.y; return *this; }
    Point2& operator-=(Point2 o) { x -= o.x; y -= o.y; return *this; }

    double dot(Point2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    // (a,b)^perp = (b,-a): rotation by -pi/2. For an edge tangent of a CCW
    // polygon this is the outward normal.
    Point2 perp() const { return {y, -x}; }
    // 2D cross product a x b = a.x*b.y - a.y*b.x (= a . b^perp).
    double cross(Point2 o) const { return x * o.y - y * o.x; }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Point2 operator*(double s, Point2 p) { return p * s; }

/// Ordered vertex list; the discrete interface.
///
/// Closed curves use the periodic index rule X_0 = X_N, X_{N+1} = X_1.
/// Edge i (1-based) joins X_{i-1} and X_i; internally vertices are stored
/// 0-based, so edge i corresponds to vertex(i-1) -> vertex(i mod N).
struct PolygonalCurve {
    std::vector<Point2> vertices;
    bool closed = true;

    int size() const { return static_cast<int>(vertices.size()); }

    // Periodic (closed) or clamped-invalid (open) vertex access, 0-based.
    const Point2& vertex(int i) const {
        int n = size();
        if (closed) {
            i %= n;
            if (i < 0) i += n;
        }
        return vertices[static_cast<std::size_t>(i)];
    }
};

/// Per-edge quantities: length, unit tangent/normal, midpoint.
struct EdgeFrame {
    double r = 0.0;
    Point2 t;
    Point2 n;
    Point2 midpoint;
};

/// Per-vertex quantities: outer angle, its half-angle trig values and the
/// bisector normal/tangent directions.
struct VertexFrame {
    double phi = 0.0;
    double cos_half = 1.0;
    double sin_half = 0.0;
    double tan_half = 0.0;
    Point2 N;
    Point2 T;
};

// Turning angles within eps_angle of +-pi are rejected; the scheme divides
// by cos(phi/2).
inline constexpr double kSharpAngleEps = 1e-6;

/// Throws InvalidCurveError / DegenerateEdgeError if the curve violates its
/// structural invariants. `check_simple` runs the O(N^2) segment
/// intersection test (construction and post-surgery only).
void validate_curve(const PolygonalCurve& curve, bool check_simple = true);

/// True if no two non-adjacent edges intersect.
bool is_simple(const PolygonalCurve& curve);

/// Winding number of a closed curve around p (0 for points outside).
int winding_number(const PolygonalCurve& curve, Point2 p);

/// One frame per edge.
/// Closed curve, N vertices: N frames, frames[e] is the edge
/// vertex(e-1) -> vertex(e) (periodic), so edge e "ends at" vertex e.
/// Open curve, N vertices: N-1 frames, frames[j] = vertex(j) -> vertex(j+1).
std::vector<EdgeFrame> edge_frames(const PolygonalCurve& curve);

/// Signed outer angles of a closed curve,
/// phi = sgn(t_in, t_out) * arccos(t_in . t_out).
/// angles[k] sits at vertex k, between frames[k] and frames[k+1 mod N].
std::vector<double> outer_angles(const PolygonalCurve& curve);
std::vector<double> outer_angles(const std::vector<EdgeFrame>& frames);

/// kappa[e] = (tan_half[e] + tan_half[e-1]) / r[e], one value per edge of a
/// closed curve, attached to the edge midpoint.
std::vector<double> discrete_curvature(const PolygonalCurve& curve);
std::vector<double> discrete_curvature(const std::vector<EdgeFrame>& frames);

/// Vertex frames of a closed curve: N = (n_in + n_out) / (2 cos_half),
/// T = (t_in + t_out) / (2 cos_half); entry k sits at vertex k, matching
/// outer_angles.
std::vector<VertexFrame> vertex_frames(const PolygonalCurve& curve);
std::vector<VertexFrame> vertex_frames(const std::vector<EdgeFrame>& frames);

double length(const PolygonalCurve& curve);

/// Signed shoelace area; positive for counterclockwise closed curves.
/// Throws UnsupportedOperationError for open curves.
double area(const PolygonalCurve& curve);

Point2 centroid_of_vertices(const PolygonalCurve& curve);

}  // namespace msk
