#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mskflow/evolve.hpp"

namespace msk {

/// Frozen column order of metrics.csv.
std::string metrics_csv_header();
void write_metrics_row(std::ostream& os, const MetricsRecord& rec);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& metrics);

/// Vertex snapshot: one "curve_id,vertex_index,x,y" row per vertex, full
/// double precision.
void write_snapshot_csv(const std::string& path, const std::vector<CurveState>& curves);
std::vector<PolygonalCurve> read_snapshot_csv(const std::string& path);

void write_events_json(const std::string& path, const std::vector<TopologyEvent>& events);

/// Fixed frame computed from the initial bounding box scaled by `scale`,
/// so frames are comparable across time.
struct ViewBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double width = 1.0;
    double height = 1.0;
};

ViewBox viewbox_for(const std::vector<CurveState>& curves, double scale = 1.5);
void write_svg_frame(const std::string& path, const std::vector<CurveState>& curves,
                     const ViewBox& box);

}  // namespace msk
