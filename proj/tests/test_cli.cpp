#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mskflow/cli.hpp"
#include "mskflow/config.hpp"
#include "mskflow/io.hpp"
#include "mskflow/shapes.hpp"

using namespace msk;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("mskflow_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

int count_lines(const fs::path& p) {
    std::ifstream is(p);
    int n = 0;
    std::string line;
    while (std::getline(is, line)) ++n;
    return n;
}

}  // namespace

TEST_CASE("shape generators") {
    auto circle = generate_shape("circle", 16);
    REQUIRE(circle.size() == 1);
    CHECK(area(circle[0]) == doctest::Approx(8.0 * std::sin(M_PI / 8.0)).epsilon(1e-12));

    auto tube = generate_shape("tube:length=8,thickness=1", 200);
    REQUIRE(tube.size() == 1);
    CHECK(area(tube[0]) == doctest::Approx(8.0 + M_PI * 0.25).epsilon(0.01));
    CHECK(length(tube[0]) == doctest::Approx(16.0 + M_PI).epsilon(0.01));

    auto dumbbell = generate_shape("dumbbell:r=30,l=5,b=0.25", 320);
    REQUIRE(dumbbell.size() == 1);
    CHECK(area(dumbbell[0]) > 0.0);  // simple, counterclockwise, validated

    auto annulus = generate_shape("annulus:r1=1,r2=3", 128);
    REQUIRE(annulus.size() == 2);
    CHECK(annulus[0].size() == 64);
    CHECK(area(annulus[0]) > 0.0);
    CHECK(area(annulus[1]) < 0.0);  // hole winds clockwise

    auto four = generate_shape("fourcircles", 80);
    REQUIRE(four.size() == 4);
    for (const auto& c : four) CHECK(c.size() == 20);

    auto ovals = generate_shape("ovals", 84);
    REQUIRE(ovals.size() == 2);
    CHECK(ovals[0].size() == 42);

    auto lshape = generate_shape("lshape", 49);
    REQUIRE(lshape.size() == 1);
    CHECK(!lshape[0].closed);
    CHECK(lshape[0].vertices.front().y == 0.0);
    CHECK(lshape[0].vertices.back().y == 0.0);

    CHECK_THROWS_AS(generate_shape("klein-bottle", 32), ConfigError);
    CHECK_THROWS_AS(generate_shape("annulus", 33), ConfigError);      // odd N
    CHECK_THROWS_AS(generate_shape("circle:bogus=1", 32), ConfigError);
    CHECK_THROWS_AS(generate_shape("circle:r=abc", 32), ConfigError);
}

TEST_CASE("snapshot round-trip preserves length and area to full precision") {
    fs::path dir = fresh_dir("roundtrip");
    std::vector<CurveState> curves;
    int id = 0;
    for (auto& c : generate_shape("annulus:r1=1,r2=3", 64)) curves.push_back({id++, std::move(c)});
    std::string path = (dir / "snap.csv").string();
    write_snapshot_csv(path, curves);

    auto loaded = generate_shape("file:" + path, 0);
    REQUIRE(loaded.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(std::fabs(length(loaded[static_cast<std::size_t>(i)]) -
                        length(curves[static_cast<std::size_t>(i)].curve)) < 1e-12);
        CHECK(std::fabs(area(loaded[static_cast<std::size_t>(i)]) -
                        area(curves[static_cast<std::size_t>(i)].curve)) < 1e-12);
    }
    CHECK_THROWS_AS(generate_shape("file:/nonexistent/nowhere.csv", 0), ConfigError);
}

TEST_CASE("metrics header is frozen") {
    CHECK(metrics_csv_header() ==
          "step,t,curve_id,L,A,kappa_min,kappa_max,maxQ_int,maxQ_ext,"
          "residual_int,residual_ext,Ldot,Adot,errA");
}

TEST_CASE("events serialize to a JSON array") {
    fs::path dir = fresh_dir("events");
    TopologyEvent ev;
    ev.kind = EventKind::pinchoff;
    ev.step = 42;
    ev.time = 0.125;
    ev.curve_ids = {0, 3};
    ev.vertices_removed = 4;
    std::string path = (dir / "events.json").string();
    write_events_json(path, {ev});

    nlohmann::json j = nlohmann::json::parse(slurp(path));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 1);
    CHECK(j[0]["kind"] == "pinchoff");
    CHECK(j[0]["step"] == 42);
    CHECK(j[0]["time"] == doctest::Approx(0.125));
    CHECK(j[0]["curve_ids"].size() == 2);
    CHECK(j[0]["vertices_removed"] == 4);
}

TEST_CASE("SVG frames hold one path per curve inside a fixed view box") {
    fs::path dir = fresh_dir("svg");
    std::vector<CurveState> curves;
    int id = 0;
    for (auto& c : generate_shape("fourcircles", 80)) curves.push_back({id++, std::move(c)});
    ViewBox box = viewbox_for(curves);
    std::string path = (dir / "frame.svg").string();
    write_svg_frame(path, curves, box);

    std::string svg = slurp(path);
    CHECK(svg.find("<?xml") == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("viewBox=") != std::string::npos);
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<path", pos)) != std::string::npos) {
        ++count;
        ++pos;
    }
    CHECK(count == 4);
}

TEST_CASE("config files reject unknown keys and bad values") {
    fs::path dir = fresh_dir("config");
    auto write_json = [&dir](const std::string& name, const std::string& body) {
        std::ofstream os(dir / name);
        os << body;
        return (dir / name).string();
    };

    RunConfig ok = load_config_file(
        write_json("ok.json", R"({"shape":"star","n":50,"steps":10,"sigma_ext":2.0})"));
    CHECK(ok.shape == "star");
    CHECK(ok.n == 50);
    CHECK(ok.sigma_ext == doctest::Approx(2.0));

    CHECK_THROWS_AS(load_config_file(write_json("bad_key.json", R"({"shappe":"star"})")),
                    ConfigError);
    CHECK_THROWS_AS(load_config_file(write_json("bad_type.json", R"({"n":"fifty"})")),
                    ConfigError);
    CHECK_THROWS_AS(load_config_file(write_json("bad_json.json", "{")), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);

    RunConfig invalid;
    invalid.steps = 0;
    invalid.t_end = 0.0;
    CHECK_THROWS_AS(validate_config(invalid), ConfigError);
    invalid.steps = 5;
    invalid.mode = "spherical";
    CHECK_THROWS_AS(validate_config(invalid), ConfigError);
}

TEST_CASE("derived thresholds follow the initial geometry") {
    std::vector<CurveState> curves;
    int id = 0;
    for (auto& c : generate_shape("fourcircles", 80)) curves.push_back({id++, std::move(c)});
    RunConfig cfg;
    EventThresholds t = derive_thresholds(cfg, curves);
    double mean_area = 0.0, mean_edge = 0.0;
    for (const auto& c : curves) {
        mean_area += std::fabs(area(c.curve));
        mean_edge += length(c.curve);
    }
    mean_area /= 4.0;
    mean_edge /= 80.0;
    CHECK(t.area_min == doctest::Approx(1e-3 * mean_area));
    CHECK(t.contact_dist == doctest::Approx(2.0 * mean_edge));
    CHECK(t.neck_width == doctest::Approx(t.contact_dist));

    cfg.neck_width = 0.05;
    CHECK(derive_thresholds(cfg, curves).neck_width == doctest::Approx(0.05));
}

TEST_CASE("cli runs a short simulation and writes every output") {
    fs::path dir = fresh_dir("run");
    int code = run_cli({"run", "--shape", "circle", "--n", "32", "--steps", "5", "--out",
                        dir.string(), "--snapshot-every", "2", "--svg-every", "2"});
    CHECK(code == 0);
    CHECK(count_lines(dir / "metrics.csv") == 6);  // header + one row per step
    CHECK(fs::exists(dir / "events.json"));
    CHECK(fs::exists(dir / "snap_final.csv"));
    CHECK(fs::exists(dir / "snap_00000000.csv"));
    CHECK(fs::exists(dir / "snap_00000002.csv"));
    CHECK(fs::exists(dir / "frame_00000002.svg"));
    std::string metrics = slurp(dir / "metrics.csv");
    CHECK(metrics.find(metrics_csv_header()) == 0);
}

TEST_CASE("cli halfplane mode runs the open-curve scheme") {
    fs::path dir = fresh_dir("run_hp");
    int code = run_cli({"run", "--mode", "halfplane", "--shape", "lshape", "--n", "49",
                        "--steps", "5", "--out", dir.string()});
    CHECK(code == 0);
    CHECK(count_lines(dir / "metrics.csv") == 6);
}

TEST_CASE("cli exit codes distinguish config and numerical failures") {
    fs::path dir = fresh_dir("fail");
    // Unknown shape: config error.
    CHECK(run_cli({"run", "--shape", "nonagon!!", "--steps", "3", "--out", dir.string()}) == 1);
    // Neither steps nor t-end: config error.
    CHECK(run_cli({"run", "--shape", "circle", "--out", dir.string()}) == 1);
    // Absurd fixed dt blows the star up: numerical failure with a snapshot.
    fs::path dir2 = fresh_dir("fail2");
    int code = run_cli({"run", "--shape", "star", "--n", "24", "--dt", "1.0", "--steps", "50",
                        "--out", dir2.string()});
    CHECK(code == 2);
    bool found_fail_snap = false;
    for (const auto& entry : fs::directory_iterator(dir2)) {
        if (entry.path().filename().string().rfind("snap_fail", 0) == 0) found_fail_snap = true;
    }
    CHECK(found_fail_snap);
}

TEST_CASE("cli flags override the config file") {
    fs::path dir = fresh_dir("override");
    std::ofstream os(dir / "cfg.json");
    os << R"({"shape":"circle","n":16,"steps":3,"out":")" << (dir / "from_file").string()
       << R"("})";
    os.close();
    int code = run_cli({"run", "--config", (dir / "cfg.json").string(), "--n", "24"});
    CHECK(code == 0);
    // n came from the flag: 24 vertices per snapshot row block (+ header).
    CHECK(count_lines(dir / "from_file" / "snap_final.csv") == 25);
}
