#include "mskflow/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace msk {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    return os;
}

}  // namespace

std::string metrics_csv_header() {
    return "step,t,curve_id,L,A,kappa_min,kappa_max,maxQ_int,maxQ_ext,"
           "residual_int,residual_ext,Ldot,Adot,errA";
}

void write_metrics_row(std::ostream& os, const MetricsRecord& m) {
    os << m.step << ',' << fmt(m.t) << ',' << m.curve_id << ',' << fmt(m.L) << ',' << fmt(m.A)
       << ',' << fmt(m.kappa_min) << ',' << fmt(m.kappa_max) << ',' << fmt(m.maxQ_int) << ','
       << fmt(m.maxQ_ext) << ',' << fmt(m.residual_int) << ',' << fmt(m.residual_ext) << ','
       << fmt(m.Ldot) << ',' << fmt(m.Adot) << ',' << fmt(m.errA) << '\n';
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& metrics) {
    std::ofstream os = open_out(path);
    os << metrics_csv_header() << '\n';
    for (const MetricsRecord& m : metrics) write_metrics_row(os, m);
}

void write_snapshot_csv(const std::string& path, const std::vector<CurveState>& curves) {
    std::ofstream os = open_out(path);
    os << "curve_id,vertex_index,x,y\n";
    for (const CurveState& c : curves) {
        for (int i = 0; i < c.curve.size(); ++i) {
            const Point2& p = c.curve.vertices[static_cast<std::size_t>(i)];
            os << c.id << ',' << i << ',' << fmt(p.x) << ',' << fmt(p.y) << '\n';
        }
    }
}

std::vector<PolygonalCurve> read_snapshot_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open vertex file '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("vertex file '" + path + "' is empty");
    // Rows may arrive in any order; vertex_index fixes the ordering.
    std::map<int, std::map<int, Point2>> by_curve;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        int id = 0, idx = 0;
        Point2 p;
        try {
            std::getline(ls, cell, ',');
            id = std::stoi(cell);
            std::getline(ls, cell, ',');
            idx = std::stoi(cell);
            std::getline(ls, cell, ',');
            p.x = std::stod(cell);
            std::getline(ls, cell, ',');
            p.y = std::stod(cell);
        } catch (const std::exception&) {
            throw ConfigError("bad row " + std::to_string(lineno) + " in '" + path + "'");
        }
        by_curve[id][idx] = p;
    }
    std::vector<PolygonalCurve> curves;
    for (auto& [id, pts] : by_curve) {
        PolygonalCurve c;
        c.closed = true;
        for (auto& [idx, p] : pts) c.vertices.push_back(p);
        curves.push_back(std::move(c));
    }
    return curves;
}

void write_events_json(const std::string& path, const std::vector<TopologyEvent>& events) {
    nlohmann::json arr = nlohmann::json::array();
    for (const TopologyEvent& ev : events) {
        arr.push_back({{"kind", to_string(ev.kind)},
                       {"step", ev.step},
                       {"time", ev.time},
                       {"curve_ids", ev.curve_ids},
                       {"vertices_removed", ev.vertices_removed}});
    }
    std::ofstream os = open_out(path);
    os << arr.dump(2) << '\n';
}

ViewBox viewbox_for(const std::vector<CurveState>& curves, double scale) {
    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
    bool first = true;
    for (const CurveState& c : curves) {
        for (const Point2& p : c.curve.vertices) {
            if (first) {
                min_x = max_x = p.x;
                min_y = max_y = p.y;
                first = false;
            }
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    double w = std::max(max_x - min_x, 1e-9);
    double h = std::max(max_y - min_y, 1e-9);
    ViewBox box;
    box.width = w * scale;
    box.height = h * scale;
    box.min_x = min_x - (box.width - w) / 2.0;
    box.min_y = min_y - (box.height - h) / 2.0;
    return box;
}

void write_svg_frame(const std::string& path, const std::vector<CurveState>& curves,
                     const ViewBox& box) {
    std::ofstream os = open_out(path);
    // SVG's y axis points down; emit flipped y coordinates.
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(box.min_x) << ' '
       << fmt(-(box.min_y + box.height)) << ' ' << fmt(box.width) << ' ' << fmt(box.height)
       << "\">\n";
    double stroke = std::max(box.width, box.height) / 300.0;
    for (const CurveState& c : curves) {
        os << "  <path d=\"";
        for (int i = 0; i < c.curve.size(); ++i) {
            const Point2& p = c.curve.vertices[static_cast<std::size_t>(i)];
            os << (i == 0 ? 'M' : 'L') << p.x << ' ' << -p.y << ' ';
        }
        if (c.curve.closed) os << 'Z';
        os << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << stroke << "\"/>\n";
    }
    os << "</svg>\n";
}

}  // namespace msk
