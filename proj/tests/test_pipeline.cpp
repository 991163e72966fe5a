#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sst/io.hpp"
#include "sst/pipeline.hpp"
#include "sst/synthetic.hpp"

using namespace sst;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "sst_test_pipeline" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// small scene + config that train in well under a second
PipelineConfig small_config(const fs::path& dir, uint64_t seed = 7) {
    auto [cube, labels] = make_synthetic_scene(quadrant_scene(32, 32, 12, 0.05, 3));
    write_cube(cube, dir / "scene.hdr");
    write_label_map(labels, dir / "gt.pgm");

    PipelineConfig cfg;
    cfg.cube_path = dir / "scene.hdr";
    cfg.labels_path = dir / "gt.pgm";
    cfg.output_dir = dir / "out";
    cfg.provider = {"linear", 16, seed + 1};
    cfg.cluster.grid = 4;
    cfg.cluster.per_cell = 1;
    cfg.cluster.iterations = 2;
    cfg.feature_dim = 16;
    cfg.heads = 2;
    cfg.blocks = 1;
    cfg.num_classes = 4;
    cfg.train.epochs = 80;
    cfg.train.lr = 3e-3;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("config file keys map onto the pipeline config") {
    const auto dir = fresh_dir("config");
    std::ofstream(dir / "run.cfg") << "# comment\n"
                                   << "input.cube = a.hdr\n"
                                   << "input.labels = b.pgm\n"
                                   << "output.dir = out\n"
                                   << "seed = 9\n"
                                   << "classes = 5\n"
                                   << "cluster.grid = 8\n"
                                   << "cluster.per-cell = 2\n"
                                   << "cluster.window = 3\n"
                                   << "features.dim = 24\n"
                                   << "derivative.enabled = false\n"
                                   << "soft-label.mode = assoc-weighted\n"
                                   << "train.epochs = 17\n"
                                   << "train.lr = 0.25\n";
    const auto kv = KeyValueConfig::from_file(dir / "run.cfg");
    const PipelineConfig cfg = PipelineConfig::from_config(kv);
    CHECK(cfg.cube_path == "a.hdr");
    CHECK(cfg.seed == 9);
    CHECK(cfg.num_classes == 5);
    CHECK(cfg.cluster.grid == 8);
    CHECK(cfg.cluster.per_cell == 2);
    CHECK(cfg.cluster.window == 3);
    CHECK(cfg.provider.dim == 24);
    CHECK_FALSE(cfg.use_derivative);
    CHECK(cfg.label_mode == SoftLabelMode::AssocWeighted);
    CHECK(cfg.train.epochs == 17);
    CHECK(cfg.train.lr == doctest::Approx(0.25));
}

TEST_CASE("missing inputs fail validation with the stage tag") {
    const auto dir = fresh_dir("validate");
    PipelineConfig cfg;
    cfg.cube_path = dir / "nope.hdr";
    cfg.labels_path = dir / "nope.pgm";
    cfg.output_dir = dir / "out";
    cfg.num_classes = 2;
    try {
        cfg.validate_paths();
        FAIL("expected validation to throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).rfind("[validate]", 0) == 0);
    }
}

TEST_CASE("pipeline produces the full manifest and sane metrics") {
    const auto dir = fresh_dir("run");
    const PipelineConfig cfg = small_config(dir);
    const PipelineOutput out = run_pipeline(cfg);

    REQUIRE(out.manifest.size() == 8);
    const char* names[] = {"derivative", "features", "assignment", "tokens",
                           "soft-labels", "checkpoint", "classmap", "metrics"};
    for (size_t i = 0; i < 8; ++i) {
        CHECK(out.manifest[i].name == names[i]);
        CHECK(fs::exists(out.manifest[i].path));
        CHECK(out.manifest[i].hash != 0);
    }
    CHECK(fs::exists(out.manifest_path));
    CHECK(out.report.oa > 0.8);  // clean quadrant scene, should be easy
    CHECK(out.report.oa <= 1.0);
    CHECK(out.report.kappa <= 1.0);

    // artifacts reload cleanly
    const ClassMap pred = read_label_map(cfg.output_dir / "classmap.pgm");
    CHECK(pred.height == 32);
    const SoftLabelMatrix sl = read_soft_labels_csv(cfg.output_dir / "soft_labels.csv");
    CHECK(sl.tokens == cfg.cluster.total_centers());
    const ClassifierParams params = load_checkpoint(cfg.output_dir / "checkpoint.bin");
    CHECK(params.classes == 4);
}

TEST_CASE("same seed twice gives byte-identical artifacts") {
    const auto dir_a = fresh_dir("repeat_a");
    const auto dir_b = fresh_dir("repeat_b");
    const PipelineOutput a = run_pipeline(small_config(dir_a));
    const PipelineOutput b = run_pipeline(small_config(dir_b));
    REQUIRE(a.manifest.size() == b.manifest.size());
    for (size_t i = 0; i < a.manifest.size(); ++i) CHECK(a.manifest[i].hash == b.manifest[i].hash);
}

TEST_CASE("a palette adds a colorized map to the manifest") {
    const auto dir = fresh_dir("palette");
    PipelineConfig cfg = small_config(dir);
    const Palette palette = {{230, 25, 75}, {60, 180, 75}, {255, 225, 25}, {0, 130, 200}};
    write_palette(palette, dir / "pal.txt");
    cfg.palette_path = dir / "pal.txt";
    const PipelineOutput out = run_pipeline(cfg);
    CHECK(out.manifest.size() == 9);
    CHECK(fs::exists(cfg.output_dir / "classmap.ppm"));
}

TEST_CASE("soft label csv roundtrip preserves validity and proportions") {
    const auto dir = fresh_dir("csv");
    SoftLabelMatrix sl;
    sl.tokens = 2;
    sl.classes = 3;
    sl.rows = {0.25, 0.5, 0.25, 0, 0, 0};
    sl.valid = {true, false};
    write_soft_labels_csv(sl, dir / "sl.csv");
    const SoftLabelMatrix back = read_soft_labels_csv(dir / "sl.csv");
    CHECK(back.tokens == 2);
    CHECK(back.classes == 3);
    CHECK(back.valid == sl.valid);
    for (size_t i = 0; i < sl.rows.size(); ++i)
        CHECK(back.rows[i] == doctest::Approx(sl.rows[i]).epsilon(1e-12));
}

TEST_CASE("bench reports per-stage timings and analytic op counts") {
    const auto dir = fresh_dir("bench");
    PipelineConfig cfg = small_config(dir);
    cfg.train.epochs = 2;
    const BenchReport rep = bench(cfg, 1);
    CHECK(rep.stages.size() >= 5);
    CHECK(rep.total_millis > 0.0);
    CHECK(rep.pixels_per_second > 0.0);
    bool found_assoc = false;
    for (const auto& s : rep.stages) {
        CHECK(s.millis >= 0.0);
        if (s.stage == "clustering") {
            found_assoc = true;
            CHECK(s.arithmetic_ops > 0);
        }
    }
    CHECK(found_assoc);
}

TEST_CASE("assignment map with too many centers cannot be written as 16-bit") {
    AssignmentMap m;
    m.height = 1;
    m.width = 1;
    m.center = {65535};
    const auto dir = fresh_dir("assign");
    CHECK_THROWS_AS(write_assignment_pgm(m, dir / "a.pgm"), std::runtime_error);
}
