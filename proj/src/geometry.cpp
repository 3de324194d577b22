#include "mskflow/geometry.hpp"

#include <algorithm>
#include <iostream>
#include <mutex>

namespace msk {

namespace {

DiagnosticSink g_sink;
std::mutex g_sink_mutex;

double clamp_unit(double v) { return std::max(-1.0, std::min(1.0, v)); }

int sgn_turn(Point2 a, Point2 b) {
    // sgn(a, b) from a . b^perp; exact zero means collinear tangents.
    double c = a.dot(b.perp());
    if (c > 0.0) return 1;
    if (c < 0.0) return -1;
    return 0;
}

// Signed turning angle between consecutive tangents, with the sharp-angle
// guard applied to the unsigned angle (catches cusps where the sign test
// degenerates to zero).
double turning_angle(Point2 t_in, Point2 t_out, int vertex_index, bool guard) {
    double dot = clamp_unit(t_in.dot(t_out));
    double theta = std::acos(dot);
    if (guard && theta >= M_PI - kSharpAngleEps) {
        throw SharpAngleError(vertex_index,
                              "turning angle at vertex " + std::to_string(vertex_index) +
                                  " within " + std::to_string(kSharpAngleEps) + " rad of pi");
    }
    return sgn_turn(t_in, t_out) * theta;
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    auto orient = [](Point2 p, Point2 q, Point2 r) {
        double v = (q - p).cross(r - p);
        if (v > 0.0) return 1;
        if (v < 0.0) return -1;
        return 0;
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    auto on_segment = [](Point2 p, Point2 q, Point2 r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

}  // namespace

void set_diagnostic_sink(DiagnosticSink sink) {
    std::lock_guard<std::mutex> lock(g_sink_mutex);
    g_sink = std::move(sink);
}

void emit_diagnostic(const std::string& message) {
    DiagnosticSink sink;
    {
        std::lock_guard<std::mutex> lock(g_sink_mutex);
        sink = g_sink;
    }
    if (sink) {
        sink(message);
    } else {
        std::cerr << "[mskflow] " << message << "\n";
    }
}

void validate_curve(const PolygonalCurve& curve, bool check_simple) {
    int n = curve.size();
    if (curve.closed && n < 3) {
        throw InvalidCurveError("closed curve needs at least 3 vertices, got " +
                                std::to_string(n));
    }
    if (!curve.closed && n < 2) {
        throw InvalidCurveError("open curve needs at least 2 vertices, got " +
                                std::to_string(n));
    }
    for (int i = 0; i < n; ++i) {
        if (!curve.vertices[static_cast<std::size_t>(i)].finite()) {
            throw InvalidCurveError("non-finite vertex at index " + std::to_string(i));
        }
    }
    int edges = curve.closed ? n : n - 1;
    for (int e = 0; e < edges; ++e) {
        Point2 a = curve.closed ? curve.vertex(e - 1) : curve.vertex(e);
        Point2 b = curve.closed ? curve.vertex(e) : curve.vertex(e + 1);
        if ((b - a).norm2() == 0.0) {
            throw DegenerateEdgeError(e, "zero-length edge at index " + std::to_string(e));
        }
    }
    if (check_simple && curve.closed && !is_simple(curve)) {
        throw InvalidCurveError("closed curve is not simple");
    }
}

bool is_simple(const PolygonalCurve& curve) {
    int n = curve.size();
    int edges = curve.closed ? n : n - 1;
    for (int i = 0; i < edges; ++i) {
        Point2 a = curve.closed ? curve.vertex(i - 1) : curve.vertex(i);
        Point2 b = curve.closed ? curve.vertex(i) : curve.vertex(i + 1);
        for (int j = i + 1; j < edges; ++j) {
            // Skip adjacent edges (shared endpoint), including the wrap pair.
            if (j == i + 1) continue;
            if (curve.closed && i == 0 && j == edges - 1) continue;
            Point2 c = curve.closed ? curve.vertex(j - 1) : curve.vertex(j);
            Point2 d = curve.closed ? curve.vertex(j) : curve.vertex(j + 1);
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

int winding_number(const PolygonalCurve& curve, Point2 p) {
    // Crossing count against the upward/downward edge rule.
    int n = curve.size();
    int w = 0;
    for (int i = 0; i < n; ++i) {
        Point2 a = curve.vertex(i);
        Point2 b = curve.vertex(i + 1);
        if (a.y <= p.y) {
            if (b.y > p.y && (b - a).cross(p - a) > 0.0) ++w;
        } else {
            if (b.y <= p.y && (b - a).cross(p - a) < 0.0) --w;
        }
    }
    return w;
}

std::vector<EdgeFrame> edge_frames(const PolygonalCurve& curve) {
    int n = curve.size();
    int edges = curve.closed ? n : n - 1;
    std::vector<EdgeFrame> frames(static_cast<std::size_t>(edges));
    for (int e = 0; e < edges; ++e) {
        Point2 a = curve.closed ? curve.vertex(e - 1) : curve.vertex(e);
        Point2 b = curve.closed ? curve.vertex(e) : curve.vertex(e + 1);
        Point2 d = b - a;
        double r = d.norm();
        if (r == 0.0) {
            throw DegenerateEdgeError(e, "zero-length edge at index " + std::to_string(e));
        }
        EdgeFrame& f = frames[static_cast<std::size_t>(e)];
        f.r = r;
        f.t = d / r;
        f.n = f.t.perp();
        f.midpoint = (a + b) * 0.5;
    }
    return frames;
}

std::vector<double> outer_angles(const std::vector<EdgeFrame>& frames) {
    int n = static_cast<int>(frames.size());
    std::vector<double> phi(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const EdgeFrame& in = frames[static_cast<std::size_t>(k)];
        const EdgeFrame& out = frames[static_cast<std::size_t>((k + 1) % n)];
        phi[static_cast<std::size_t>(k)] = turning_angle(in.t, out.t, k, /*guard=*/false);
    }
    return phi;
}

std::vector<double> outer_angles(const PolygonalCurve& curve) {
    return outer_angles(edge_frames(curve));
}

namespace {

struct HalfAngles {
    std::vector<double> c, s, t;
};

HalfAngles half_angles(const std::vector<EdgeFrame>& frames) {
    int n = static_cast<int>(frames.size());
    HalfAngles h;
    h.c.resize(static_cast<std::size_t>(n));
    h.s.resize(static_cast<std::size_t>(n));
    h.t.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const EdgeFrame& in = frames[static_cast<std::size_t>(k)];
        const EdgeFrame& out = frames[static_cast<std::size_t>((k + 1) % n)];
        double phi = turning_angle(in.t, out.t, k, /*guard=*/true);
        h.c[static_cast<std::size_t>(k)] = std::cos(phi / 2.0);
        h.s[static_cast<std::size_t>(k)] = std::sin(phi / 2.0);
        h.t[static_cast<std::size_t>(k)] =
            h.s[static_cast<std::size_t>(k)] / h.c[static_cast<std::size_t>(k)];
    }
    return h;
}

}  // namespace

std::vector<double> discrete_curvature(const std::vector<EdgeFrame>& frames) {
    int n = static_cast<int>(frames.size());
    HalfAngles h = half_angles(frames);
    std::vector<double> kappa(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        int prev = (e + n - 1) % n;
        kappa[static_cast<std::size_t>(e)] =
            (h.t[static_cast<std::size_t>(e)] + h.t[static_cast<std::size_t>(prev)]) /
            frames[static_cast<std::size_t>(e)].r;
    }
    return kappa;
}

std::vector<double> discrete_curvature(const PolygonalCurve& curve) {
    if (!curve.closed) {
        throw UnsupportedOperationError("discrete_curvature requires a closed curve");
    }
    return discrete_curvature(edge_frames(curve));
}

std::vector<VertexFrame> vertex_frames(const std::vector<EdgeFrame>& frames) {
    int n = static_cast<int>(frames.size());
    HalfAngles h = half_angles(frames);
    std::vector<VertexFrame> vf(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const EdgeFrame& in = frames[static_cast<std::size_t>(k)];
        const EdgeFrame& out = frames[static_cast<std::size_t>((k + 1) % n)];
        VertexFrame& v = vf[static_cast<std::size_t>(k)];
        double c = h.c[static_cast<std::size_t>(k)];
        v.cos_half = c;
        v.sin_half = h.s[static_cast<std::size_t>(k)];
        v.tan_half = h.t[static_cast<std::size_t>(k)];
        v.phi = 2.0 * std::atan2(v.sin_half, v.cos_half);
        v.N = (in.n + out.n) / (2.0 * c);
        v.T = (in.t + out.t) / (2.0 * c);
    }
    return vf;
}

std::vector<VertexFrame> vertex_frames(const PolygonalCurve& curve) {
    if (!curve.closed) {
        throw UnsupportedOperationError("vertex_frames requires a closed curve");
    }
    return vertex_frames(edge_frames(curve));
}

double length(const PolygonalCurve& curve) {
    int n = curve.size();
    int edges = curve.closed ? n : n - 1;
    double L = 0.0;
    for (int e = 0; e < edges; ++e) {
        Point2 a = curve.closed ? curve.vertex(e - 1) : curve.vertex(e);
        Point2 b = curve.closed ? curve.vertex(e) : curve.vertex(e + 1);
        L += (b - a).norm();
    }
    return L;
}

double area(const PolygonalCurve& curve) {
    if (!curve.closed) {
        throw UnsupportedOperationError("area requires a closed curve");
    }
    int n = curve.size();
    double twice = 0.0;
    for (int i = 0; i < n; ++i) {
        twice += curve.vertex(i).cross(curve.vertex(i + 1));
    }
    return 0.5 * twice;
}

Point2 centroid_of_vertices(const PolygonalCurve& curve) {
    Point2 c;
    for (const Point2& p : curve.vertices) c += p;
    return c / static_cast<double>(curve.size());
}

}  // namespace msk
