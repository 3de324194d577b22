#include "mskflow/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "mskflow/io.hpp"

namespace msk {

namespace {

constexpr double kTau = 2.0 * M_PI;

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown(const ShapeSpec& spec, const std::set<std::string>& known) {
    for (const auto& [key, value] : spec.params) {
        if (!known.count(key)) {
            throw ConfigError("shape '" + spec.name + "' does not take parameter '" + key + "'");
        }
    }
}

// Equal-arclength resample of a parametric closed curve. The parameter runs
// over [0, 1); chord lengths of a dense polyline stand in for arclength.
PolygonalCurve sample_closed(const std::function<Point2(double)>& f, int n) {
    int dense = std::max(4096, 64 * n);
    std::vector<Point2> pts(static_cast<std::size_t>(dense));
    for (int i = 0; i < dense; ++i) {
        pts[static_cast<std::size_t>(i)] = f(static_cast<double>(i) / dense);
    }
    std::vector<double> cum(static_cast<std::size_t>(dense) + 1, 0.0);
    for (int i = 0; i < dense; ++i) {
        cum[static_cast<std::size_t>(i) + 1] =
            cum[static_cast<std::size_t>(i)] +
            (pts[static_cast<std::size_t>((i + 1) % dense)] - pts[static_cast<std::size_t>(i)])
                .norm();
    }
    double total = cum.back();
    PolygonalCurve curve;
    curve.closed = true;
    curve.vertices.resize(static_cast<std::size_t>(n));
    int seg = 0;
    for (int k = 0; k < n; ++k) {
        double target = total * k / n;
        while (seg + 1 < dense && cum[static_cast<std::size_t>(seg) + 1] < target) ++seg;
        double s0 = cum[static_cast<std::size_t>(seg)];
        double s1 = cum[static_cast<std::size_t>(seg) + 1];
        double tloc = (s1 > s0) ? (target - s0) / (s1 - s0) : 0.0;
        Point2 a = pts[static_cast<std::size_t>(seg)];
        Point2 b = pts[static_cast<std::size_t>((seg + 1) % dense)];
        curve.vertices[static_cast<std::size_t>(k)] = a + (b - a) * tloc;
    }
    return curve;
}

PolygonalCurve stadium(double straight, double radius, int n) {
    double cap = M_PI * radius;
    double total = 2.0 * straight + 2.0 * cap;
    double hx = straight / 2.0;
    auto at = [&](double u) -> Point2 {
        double s = u * total;
        if (s < straight) {  // bottom, left to right
            return {-hx + s, -radius};
        }
        s -= straight;
        if (s < cap) {  // right cap, -pi/2 to pi/2
            double a = -M_PI / 2.0 + s / radius;
            return {hx + radius * std::cos(a), radius * std::sin(a)};
        }
        s -= cap;
        if (s < straight) {  // top, right to left
            return {hx - s, radius};
        }
        s -= straight;
        double a = M_PI / 2.0 + s / radius;  // left cap
        return {-hx + radius * std::cos(a), radius * std::sin(a)};
    };
    return sample_closed(at, n);
}

PolygonalCurve dumbbell_curve(double r, double l, double b, int n) {
    if (b <= 0.0 || b >= 2.0 * r) throw ConfigError("dumbbell needs 0 < b < 2r");
    double hb = b / 2.0;
    double hl = l / 2.0;
    double xc = hl + std::sqrt(r * r - hb * hb);
    double alpha = std::atan2(hb, hl - xc);  // junction angle on the right circle
    double arc = 2.0 * alpha * r;
    double total = 2.0 * l + 2.0 * arc;
    auto at = [&](double u) -> Point2 {
        double s = u * total;
        if (s < l) {  // bottom bar, left junction to right junction
            return {-hl + s, -hb};
        }
        s -= l;
        if (s < arc) {  // right bell, angle -alpha .. alpha through 0
            double a = -alpha + s / r;
            return {xc + r * std::cos(a), r * std::sin(a)};
        }
        s -= arc;
        if (s < l) {  // top bar, right to left
            return {hl - s, hb};
        }
        s -= l;
        double a = (M_PI - alpha) + s / r;  // left bell
        return {-xc + r * std::cos(a), r * std::sin(a)};
    };
    return sample_closed(at, n);
}

// Open polyline resampled with every corner kept as a vertex; edge counts
// per segment are proportional to segment length (largest remainder).
PolygonalCurve sample_polyline(const std::vector<Point2>& corners, int n) {
    int segs = static_cast<int>(corners.size()) - 1;
    int edges = n - 1;
    if (edges < segs) {
        throw ConfigError("polyline shape needs at least " + std::to_string(segs + 1) +
                          " vertices");
    }
    std::vector<double> len(static_cast<std::size_t>(segs));
    double total = 0.0;
    for (int i = 0; i < segs; ++i) {
        len[static_cast<std::size_t>(i)] =
            (corners[static_cast<std::size_t>(i) + 1] - corners[static_cast<std::size_t>(i)])
                .norm();
        total += len[static_cast<std::size_t>(i)];
    }
    std::vector<int> count(static_cast<std::size_t>(segs), 1);
    std::vector<double> frac(static_cast<std::size_t>(segs));
    int assigned = segs;
    for (int i = 0; i < segs; ++i) {
        double exact = edges * len[static_cast<std::size_t>(i)] / total;
        int extra = std::max(0, static_cast<int>(std::floor(exact)) - 1);
        count[static_cast<std::size_t>(i)] += extra;
        assigned += extra;
        frac[static_cast<std::size_t>(i)] = exact - std::floor(exact);
    }
    while (assigned < edges) {
        int best = static_cast<int>(std::max_element(frac.begin(), frac.end()) - frac.begin());
        count[static_cast<std::size_t>(best)] += 1;
        frac[static_cast<std::size_t>(best)] = -1.0;
        ++assigned;
    }
    PolygonalCurve curve;
    curve.closed = false;
    for (int i = 0; i < segs; ++i) {
        Point2 a = corners[static_cast<std::size_t>(i)];
        Point2 b = corners[static_cast<std::size_t>(i) + 1];
        int c = count[static_cast<std::size_t>(i)];
        for (int k = 0; k < c; ++k) {
            curve.vertices.push_back(a + (b - a) * (static_cast<double>(k) / c));
        }
    }
    curve.vertices.push_back(corners.back());
    return curve;
}

int particles_share(int n, int parts, const std::string& shape) {
    if (n % parts != 0) {
        throw ConfigError("shape '" + shape + "' needs N divisible by " + std::to_string(parts));
    }
    return n / parts;
}

}  // namespace

PolygonalCurve regular_polygon(int n, double r, double cx, double cy) {
    PolygonalCurve curve;
    curve.closed = true;
    curve.vertices.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double a = kTau * k / n;
        curve.vertices[static_cast<std::size_t>(k)] = {cx + r * std::cos(a),
                                                       cy + r * std::sin(a)};
    }
    return curve;
}

ShapeSpec parse_shape(const std::string& text) {
    ShapeSpec spec;
    auto colon = text.find(':');
    if (colon == std::string::npos) {
        spec.name = text;
        return spec;
    }
    spec.name = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    if (spec.name == "file") {
        spec.file = rest;
        return spec;
    }
    std::istringstream is(rest);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("bad shape parameter '" + item + "' (expected key=value)");
        }
        try {
            spec.params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad numeric value in shape parameter '" + item + "'");
        }
    }
    return spec;
}

std::vector<PolygonalCurve> generate_shape(const ShapeSpec& spec, int n) {
    std::vector<PolygonalCurve> curves;

    if (spec.name == "circle") {
        reject_unknown(spec, {"r", "cx", "cy"});
        curves.push_back(regular_polygon(n, get_param(spec.params, "r", 1.0),
                                         get_param(spec.params, "cx", 0.0),
                                         get_param(spec.params, "cy", 0.0)));
    } else if (spec.name == "star") {
        reject_unknown(spec, {"r", "amp", "spikes"});
        double r = get_param(spec.params, "r", 1.0);
        double amp = get_param(spec.params, "amp", 0.2);
        double spikes = get_param(spec.params, "spikes", 5.0);
        curves.push_back(sample_closed(
            [&](double u) -> Point2 {
                double th = kTau * u;
                double rad = r * (1.0 + amp * std::cos(spikes * th));
                return {rad * std::cos(th), rad * std::sin(th)};
            },
            n));
    } else if (spec.name == "tube") {
        reject_unknown(spec, {"length", "thickness"});
        double len = get_param(spec.params, "length", 8.0);
        double th = get_param(spec.params, "thickness", 1.0);
        curves.push_back(stadium(len, th / 2.0, n));
    } else if (spec.name == "annulus") {
        reject_unknown(spec, {"r1", "r2"});
        double r1 = get_param(spec.params, "r1", 1.0);
        double r2 = get_param(spec.params, "r2", 3.0);
        if (!(0.0 < r1 && r1 < r2)) throw ConfigError("annulus needs 0 < r1 < r2");
        int per = particles_share(n, 2, spec.name);
        curves.push_back(regular_polygon(per, r2));
        PolygonalCurve inner = regular_polygon(per, r1);
        std::reverse(inner.vertices.begin(), inner.vertices.end());  // hole winds clockwise
        curves.push_back(inner);
    } else if (spec.name == "fourcircles") {
        reject_unknown(spec, {"spread", "r1", "r2", "r3", "r4"});
        double s = get_param(spec.params, "spread", 2.0);
        double radii[4] = {get_param(spec.params, "r1", 1.0), get_param(spec.params, "r2", 0.8),
                           get_param(spec.params, "r3", 0.65), get_param(spec.params, "r4", 0.5)};
        Point2 centers[4] = {{-s, -s}, {s, -s}, {s, s}, {-s, s}};
        int per = particles_share(n, 4, spec.name);
        for (int i = 0; i < 4; ++i) {
            curves.push_back(regular_polygon(per, radii[i], centers[i].x, centers[i].y));
        }
    } else if (spec.name == "ovals") {
        reject_unknown(spec, {"a", "b", "gap"});
        double a = get_param(spec.params, "a", 1.2);
        double b = get_param(spec.params, "b", 0.6);
        double gap = get_param(spec.params, "gap", 0.2);
        int per = particles_share(n, 2, spec.name);
        for (double side : {-1.0, 1.0}) {
            double cx = side * (a + gap / 2.0);
            curves.push_back(sample_closed(
                [&](double u) -> Point2 {
                    double th = kTau * u;
                    return {cx + a * std::cos(th), b * std::sin(th)};
                },
                per));
        }
    } else if (spec.name == "dumbbell") {
        reject_unknown(spec, {"r", "l", "b"});
        curves.push_back(dumbbell_curve(get_param(spec.params, "r", 30.0),
                                        get_param(spec.params, "l", 5.0),
                                        get_param(spec.params, "b", 0.25), n));
    } else if (spec.name == "lshape") {
        reject_unknown(spec, {"w", "h", "tw", "th"});
        double w = get_param(spec.params, "w", 2.0);
        double h = get_param(spec.params, "h", 1.0);
        double tw = get_param(spec.params, "tw", 1.0);
        double th = get_param(spec.params, "th", 2.0);
        if (!(0.0 < tw && tw < w) || !(0.0 < h && h < th)) {
            throw ConfigError("lshape needs 0 < tw < w and 0 < h < th");
        }
        std::vector<Point2> corners = {{w, 0.0}, {w, h}, {tw, h}, {tw, th}, {0.0, th}, {0.0, 0.0}};
        curves.push_back(sample_polyline(corners, n));
    } else if (spec.name == "file") {
        curves = read_snapshot_csv(spec.file);
    } else {
        throw ConfigError("unknown shape '" + spec.name + "'");
    }

    for (const PolygonalCurve& c : curves) validate_curve(c);
    return curves;
}

std::vector<PolygonalCurve> generate_shape(const std::string& text, int n) {
    return generate_shape(parse_shape(text), n);
}

}  // namespace msk
