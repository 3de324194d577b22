#pragma once

#include <map>
#include <string>
#include <vector>

#include "mskflow/geometry.hpp"

namespace msk {

/// Parsed shape request: "circle", "circle:r=2", "annulus:r1=1,r2=3",
/// "file:vertices.csv", ...
struct ShapeSpec {
    std::string name;
    std::map<std::string, double> params;
    std::string file;  // only for name == "file"
};

ShapeSpec parse_shape(const std::string& text);

/// Builds the initial curve set for a named generator with N vertices in
/// total (split across particles for multi-curve shapes). Closed shapes are
/// produced with equispaced vertices and counterclockwise orientation
/// (annulus holes clockwise); "lshape" yields one open curve with both
/// endpoints on the x-axis. Throws ConfigError on bad parameters.
///
/// Generators: circle (r), star (r, amp, spikes), tube (length, thickness),
/// annulus (r1, r2), fourcircles (spread, r1..r4), ovals (a, b, gap),
/// dumbbell (r, l, b), lshape (w, h, tw, th), file:<csv path>.
std::vector<PolygonalCurve> generate_shape(const ShapeSpec& spec, int N);
std::vector<PolygonalCurve> generate_shape(const std::string& text, int N);

/// Regular N-gon of circumradius r, counterclockwise, centered at (cx, cy).
PolygonalCurve regular_polygon(int N, double r, double cx = 0.0, double cy = 0.0);

}  // namespace msk
