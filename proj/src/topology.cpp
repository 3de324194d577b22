#include "mskflow/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace msk {

namespace {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    Point2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

// Cyclic slice of `count` vertices starting at `first`, walking forward.
std::vector<Point2> cyclic_slice(const PolygonalCurve& curve, int first, int count) {
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out.push_back(curve.vertex(first + k));
    return out;
}

const CurveState& find_curve(const std::vector<CurveState>& curves, int id) {
    for (const CurveState& c : curves) {
        if (c.id == id) return c;
    }
    throw Error("no curve with id " + std::to_string(id));
}

}  // namespace

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::disappearance: return "disappearance";
        case EventKind::coalescence: return "coalescence";
        case EventKind::pinchoff: return "pinchoff";
    }
    return "unknown";
}

double segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
    auto orient = [](Point2 p, Point2 q, Point2 r) { return (q - p).cross(r - p); };
    double o1 = orient(a0, a1, b0), o2 = orient(a0, a1, b1);
    double o3 = orient(b0, b1, a0), o4 = orient(b0, b1, a1);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
        o4 != 0) {
        return 0.0;
    }
    return std::min(std::min(point_segment_distance(b0, a0, a1),
                             point_segment_distance(b1, a0, a1)),
                    std::min(point_segment_distance(a0, b0, b1),
                             point_segment_distance(a1, b0, b1)));
}

std::vector<int> detect_disappearance(const std::vector<CurveState>& curves,
                                      const EventThresholds& thresholds) {
    std::vector<int> ids;
    for (const CurveState& c : curves) {
        if (c.curve.closed && std::fabs(area(c.curve)) < thresholds.area_min) {
            ids.push_back(c.id);
        }
    }
    return ids;
}

std::vector<MergePlan> detect_coalescence(const std::vector<CurveState>& curves,
                                          const EventThresholds& thresholds) {
    std::vector<const CurveState*> sorted;
    for (const CurveState& c : curves) sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(),
              [](const CurveState* a, const CurveState* b) { return a->id < b->id; });

    std::vector<MergePlan> plans;
    for (std::size_t a = 0; a < sorted.size(); ++a) {
        for (std::size_t b = a + 1; b < sorted.size(); ++b) {
            const PolygonalCurve& ca = sorted[a]->curve;
            const PolygonalCurve& cb = sorted[b]->curve;
            MergePlan plan;
            plan.id_a = sorted[a]->id;
            plan.id_b = sorted[b]->id;
            plan.distance = std::numeric_limits<double>::infinity();
            for (int i = 0; i < ca.size(); ++i) {
                for (int j = 0; j < cb.size(); ++j) {
                    double d = (ca.vertex(i) - cb.vertex(j)).norm();
                    if (d < plan.distance) {
                        plan.distance = d;
                        plan.vertex_a = i;
                        plan.vertex_b = j;
                    }
                }
            }
            if (plan.distance < thresholds.contact_dist) plans.push_back(plan);
        }
    }
    return plans;
}

TopologyEvent apply_merge(std::vector<CurveState>& curves, const MergePlan& plan,
                          const EventThresholds& thresholds, long step, double time) {
    const CurveState& a = find_curve(curves, plan.id_a);
    const CurveState& b = find_curve(curves, plan.id_b);
    int trim = thresholds.neighbor_trim;
    int removed_a = 2 * trim + 1;
    int removed_b = 2 * trim + 1;
    int keep_a = a.curve.size() - removed_a;
    int keep_b = b.curve.size() - removed_b;
    if (keep_a + keep_b < 3) {
        throw SurgeryError("merge of curves " + std::to_string(plan.id_a) + " and " +
                           std::to_string(plan.id_b) + " leaves fewer than 3 vertices");
    }

    // Walk each curve forward from just after its deleted arc to just
    // before it; concatenating the two chains closes the loop through the
    // contact corridor on both sides.
    PolygonalCurve merged;
    merged.closed = true;
    merged.vertices = cyclic_slice(a.curve, plan.vertex_a + trim + 1, keep_a);
    std::vector<Point2> chain_b = cyclic_slice(b.curve, plan.vertex_b + trim + 1, keep_b);
    merged.vertices.insert(merged.vertices.end(), chain_b.begin(), chain_b.end());

    try {
        validate_curve(merged, /*check_simple=*/true);
    } catch (const Error& e) {
        throw SurgeryError("merge of curves " + std::to_string(plan.id_a) + " and " +
                           std::to_string(plan.id_b) + " produced an invalid polygon: " +
                           e.what());
    }
    if (area(merged) <= 0.0) {
        throw SurgeryError("merge of curves " + std::to_string(plan.id_a) + " and " +
                           std::to_string(plan.id_b) + " lost counterclockwise orientation");
    }

    TopologyEvent ev;
    ev.kind = EventKind::coalescence;
    ev.step = step;
    ev.time = time;
    ev.curve_ids = {plan.id_a, plan.id_b};
    ev.vertices_removed = removed_a + removed_b;

    for (CurveState& c : curves) {
        if (c.id == plan.id_a) c.curve = std::move(merged);
    }
    curves.erase(std::remove_if(curves.begin(), curves.end(),
                                [&plan](const CurveState& c) { return c.id == plan.id_b; }),
                 curves.end());
    return ev;
}

std::vector<TopologyEvent> detect_and_apply_pinchoff(std::vector<CurveState>& curves,
                                                     int& next_id,
                                                     const EventThresholds& thresholds, long step,
                                                     double time) {
    std::vector<TopologyEvent> events;
    std::vector<CurveState> added;

    for (CurveState& cs : curves) {
        if (!cs.curve.closed) continue;
        const PolygonalCurve& curve = cs.curve;
        int n = curve.size();
        if (n < 8) continue;

        // Closest pair of non-adjacent edges; edge e joins vertex(e-1) and
        // vertex(e), the +-2 index window around each edge is excluded. A
        // genuine neck is formed by two opposing walls (anti-aligned
        // normals) that are much closer in space than along the curve;
        // without both conditions near-neighbor and corner-adjacent edges
        // of any fine polygon sit within the threshold.
        std::vector<double> arc(static_cast<std::size_t>(n) + 1, 0.0);
        std::vector<Point2> tangent(static_cast<std::size_t>(n));
        for (int e = 0; e < n; ++e) {
            Point2 d = curve.vertex(e) - curve.vertex(e - 1);
            arc[static_cast<std::size_t>(e) + 1] = arc[static_cast<std::size_t>(e)] + d.norm();
            tangent[static_cast<std::size_t>(e)] = d / d.norm();
        }
        double total_arc = arc.back();
        int best_i = -1, best_j = -1;
        double best = thresholds.neck_width;
        for (int i = 0; i < n; ++i) {
            Point2 a0 = curve.vertex(i - 1), a1 = curve.vertex(i);
            for (int j = i + 1; j < n; ++j) {
                int gap = std::min(j - i, n - (j - i));
                if (gap <= 2) continue;
                if (tangent[static_cast<std::size_t>(i)].dot(
                        tangent[static_cast<std::size_t>(j)]) > -0.5) {
                    continue;
                }
                double d = segment_distance(a0, a1, curve.vertex(j - 1), curve.vertex(j));
                double along = arc[static_cast<std::size_t>(j)] - arc[static_cast<std::size_t>(i)];
                along = std::min(along, total_arc - along);
                if (d < best && d < 0.5 * along) {
                    best = d;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_i < 0) continue;

        int trim = thresholds.neighbor_trim;
        // Children split at the neck: vertices i..j-1 and j..i-1, each end
        // pulled back by the trim count.
        int raw1 = best_j - best_i;
        int raw2 = n - raw1;
        int count1 = raw1 - 2 * trim;
        int count2 = raw2 - 2 * trim;
        int removed = n - std::max(count1, 0) - std::max(count2, 0);

        TopologyEvent ev;
        ev.kind = EventKind::pinchoff;
        ev.step = step;
        ev.time = time;
        ev.curve_ids = {cs.id};
        ev.vertices_removed = removed;

        std::vector<PolygonalCurve> children;
        for (auto [first, count] : {std::pair<int, int>{best_i + trim, count1},
                                    std::pair<int, int>{best_j + trim, count2}}) {
            if (count < 3) continue;
            PolygonalCurve child;
            child.closed = true;
            child.vertices = cyclic_slice(curve, first, count);
            try {
                validate_curve(child, /*check_simple=*/true);
            } catch (const Error& e) {
                throw SurgeryError("pinch-off of curve " + std::to_string(cs.id) +
                                   " produced an invalid child: " + e.what());
            }
            children.push_back(std::move(child));
        }
        if (children.empty()) {
            // Both children degenerate: the whole curve goes away.
            ev.kind = EventKind::disappearance;
            ev.vertices_removed = n;
            cs.curve.vertices.clear();
            events.push_back(ev);
            continue;
        }

        cs.curve = std::move(children.front());
        for (std::size_t k = 1; k < children.size(); ++k) {
            CurveState extra;
            extra.id = next_id++;
            extra.curve = std::move(children[k]);
            ev.curve_ids.push_back(extra.id);
            added.push_back(std::move(extra));
        }
        if (children.size() == 1) {
            // One side vanished below 3 vertices; log it as a disappearance
            // alongside the split.
            TopologyEvent gone;
            gone.kind = EventKind::disappearance;
            gone.step = step;
            gone.time = time;
            gone.curve_ids = {cs.id};
            gone.vertices_removed = std::min(count1, count2) + 2 * trim;
            events.push_back(ev);
            events.push_back(gone);
            continue;
        }
        events.push_back(ev);
    }

    curves.erase(std::remove_if(curves.begin(), curves.end(),
                                [](const CurveState& c) { return c.curve.vertices.empty(); }),
                 curves.end());
    for (CurveState& c : added) curves.push_back(std::move(c));
    return events;
}

}  // namespace msk
