#pragma once

#include <string>
#include <vector>

#include "mskflow/geometry.hpp"

namespace msk {

/// A curve with a stable identity across steps and surgeries.
struct CurveState {
    int id = 0;
    PolygonalCurve curve;
};

struct EventThresholds {
    double area_min = 0.0;      // particle removal: |A| below this
    double contact_dist = 0.0;  // coalescence trigger: vertex-vertex distance
    double neck_width = 0.0;    // pinch-off trigger: edge-edge distance
    int neighbor_trim = 1;      // extra vertices removed around a contact point
};

enum class EventKind { disappearance, coalescence, pinchoff };

struct TopologyEvent {
    EventKind kind = EventKind::disappearance;
    long step = 0;
    double time = 0.0;
    std::vector<int> curve_ids;
    int vertices_removed = 0;
};

std::string to_string(EventKind kind);

/// Pair of curves to merge and their closest vertex pair.
struct MergePlan {
    int id_a = 0;
    int id_b = 0;
    int vertex_a = 0;
    int vertex_b = 0;
    double distance = 0.0;
};

/// Ids of closed curves whose |area| dropped below area_min.
std::vector<int> detect_disappearance(const std::vector<CurveState>& curves,
                                      const EventThresholds& thresholds);

/// One plan per curve pair whose minimum inter-vertex distance is below
/// contact_dist, in ascending (id_a, id_b) order.
std::vector<MergePlan> detect_coalescence(const std::vector<CurveState>& curves,
                                          const EventThresholds& thresholds);

/// Deletes the closest vertices plus neighbor_trim neighbors on each side
/// from both curves and concatenates the remaining chains into one closed
/// counterclockwise curve, which replaces curve a; curve b is removed.
/// Throws SurgeryError if the merged polygon is invalid.
TopologyEvent apply_merge(std::vector<CurveState>& curves, const MergePlan& plan,
                          const EventThresholds& thresholds, long step, double time);

/// Splits any curve whose non-adjacent edges (index window +-2 excluded)
/// come closer than neck_width into two closed curves at the neck. Children
/// with fewer than 3 vertices are dropped and logged as disappearances.
std::vector<TopologyEvent> detect_and_apply_pinchoff(std::vector<CurveState>& curves,
                                                     int& next_id,
                                                     const EventThresholds& thresholds, long step,
                                                     double time);

/// Shortest distance between two segments.
double segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1);

}  // namespace msk
