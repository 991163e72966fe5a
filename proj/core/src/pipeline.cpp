#include "sst/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "sst/derivative.hpp"
#include "sst/io.hpp"

namespace sst {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename Fn>
auto run_stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error("[" + name + "] " + e.what());
    }
}

uint64_t combine_hash(uint64_t a, uint64_t b) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (uint64_t word : {a, b})
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    return h;
}

uint64_t hash_cube_artifact(const std::filesystem::path& header_path) {
    auto raw = header_path;
    raw.replace_extension(".raw");
    return combine_hash(hash_file(header_path), hash_file(raw));
}

std::vector<uint16_t> predict_token_classes(const Mat& probs) {
    std::vector<uint16_t> classes(probs.rows, 0);
    for (int m = 0; m < probs.rows; ++m) {
        int best = 0;
        for (int c = 1; c < probs.cols; ++c)
            if (probs.at(m, c) > probs.at(m, best)) best = c;
        classes[m] = static_cast<uint16_t>(best);
    }
    return classes;
}

// Exact per-pixel window sizes summed, the basis of the association op count.
uint64_t association_window_sum(int height, int width, const ClusterConfig& cfg) {
    uint64_t sum = 0;
    std::vector<int> row_cells(height), col_cells(width);
    for (int y = 0; y < height; ++y) row_cells[y] = cell_of(y, height, cfg.grid);
    for (int x = 0; x < width; ++x) col_cells[x] = cell_of(x, width, cfg.grid);
    for (int y = 0; y < height; ++y) {
        const int cy0 = std::max(0, row_cells[y] - cfg.window);
        const int cy1 = std::min(cfg.grid - 1, row_cells[y] + cfg.window);
        for (int x = 0; x < width; ++x) {
            const int cx0 = std::max(0, col_cells[x] - cfg.window);
            const int cx1 = std::min(cfg.grid - 1, col_cells[x] + cfg.window);
            sum += static_cast<uint64_t>(cy1 - cy0 + 1) * (cx1 - cx0 + 1) * cfg.per_cell;
        }
    }
    return sum;
}

}  // namespace

PipelineConfig PipelineConfig::from_config(const KeyValueConfig& kv) {
    PipelineConfig cfg;
    cfg.cube_path = kv.get_string("input.cube", "");
    cfg.labels_path = kv.get_string("input.labels", "");
    cfg.palette_path = kv.get_string("input.palette", "");
    cfg.output_dir = kv.get_string("output.dir", "out");
    cfg.seed = kv.get_u64("seed", 0);

    cfg.provider.name = kv.get_string("features.provider", "linear");
    cfg.provider.dim = kv.get_int("features.dim", 32);
    cfg.provider.seed = kv.get_u64("features.seed", cfg.seed + 1);

    cfg.derivative_step = kv.get_int("derivative.step", 1);
    cfg.use_derivative = kv.get_bool("derivative.enabled", true);

    cfg.cluster.grid = kv.get_int("cluster.grid", 16);
    cfg.cluster.per_cell = kv.get_int("cluster.per-cell", 4);
    cfg.cluster.iterations = kv.get_int("cluster.iters", 4);
    cfg.cluster.knn = kv.get_int("cluster.knn", 9);
    cfg.cluster.window = kv.get_int("cluster.window", 1);
    cfg.cluster.threads = kv.get_int("threads", 1);

    cfg.label_mode = parse_soft_label_mode(kv.get_string("soft-label.mode", "hard-count"));
    cfg.hard_label_ablation = kv.get_bool("soft-label.hard", false);

    cfg.feature_dim = kv.get_int("classifier.dim", 32);
    cfg.heads = kv.get_int("classifier.heads", 4);
    cfg.blocks = kv.get_int("classifier.blocks", 2);
    cfg.num_classes = kv.get_int("classes", 0);

    cfg.train.epochs = kv.get_int("train.epochs", 100);
    cfg.train.batch = kv.get_int("train.batch", 1);
    cfg.train.lr = kv.get_double("train.lr", 1e-3);
    cfg.train.lr_floor = kv.get_double("train.lr-floor", 0.0);
    cfg.train.beta1 = kv.get_double("train.beta1", 0.9);
    cfg.train.beta2 = kv.get_double("train.beta2", 0.999);
    cfg.train.eps = kv.get_double("train.eps", 1e-8);
    cfg.train.seed = kv.get_u64("train.seed", cfg.seed + 5);
    return cfg;
}

void PipelineConfig::validate_paths() const {
    if (cube_path.empty() || !std::filesystem::exists(cube_path))
        throw std::runtime_error("[validate] input cube not found: " + cube_path.string());
    if (labels_path.empty() || !std::filesystem::exists(labels_path))
        throw std::runtime_error("[validate] label map not found: " + labels_path.string());
    if (!palette_path.empty() && !std::filesystem::exists(palette_path))
        throw std::runtime_error("[validate] palette not found: " + palette_path.string());
    if (num_classes < 1) throw std::runtime_error("[validate] classes must be >= 1");
}

PipelineOutput run_pipeline(const PipelineConfig& config) {
    config.validate_paths();
    std::filesystem::create_directories(config.output_dir);
    const auto& dir = config.output_dir;

    PipelineOutput out;
    auto add_artifact = [&out](const std::string& name, const std::filesystem::path& p,
                               uint64_t hash) {
        out.manifest.push_back(ManifestEntry{name, p.string(), hash});
    };

    const HsiCube cube = run_stage("read", [&] { return read_cube(config.cube_path); });
    const LabelMap labels = run_stage("read", [&] { return read_label_map(config.labels_path); });
    if (labels.height != cube.height || labels.width != cube.width)
        throw std::runtime_error("[read] cube and label dimensions disagree");

    // derive
    CubeD deriv;
    if (config.use_derivative) {
        deriv = run_stage("derive", [&] { return first_derivative(cube, config.derivative_step); });
        const auto p = dir / "derivative.hdr";
        write_cube(to_float_cube(deriv), p);
        add_artifact("derivative", p, hash_cube_artifact(p));
    }

    // features: semantic stand-in at C1, then standardized C2 projections
    const int c2 = config.feature_dim;
    FeatureMap semantic_c2, query;
    run_stage("features", [&] {
        const FeatureMap semantic = semantic_features(cube, config.provider);
        semantic_c2 = project_features(semantic, init_linear_map(semantic.dim, c2,
                                                                 config.seed + 2));
        const FeatureMap spectral =
            project_features(to_feature_map(cube), init_linear_map(cube.bands, c2,
                                                                   config.seed + 3));
        std::vector<const FeatureMap*> parts = {&semantic_c2, &spectral};
        FeatureMap deriv_proj;
        if (config.use_derivative) {
            deriv_proj = project_features(to_feature_map(deriv),
                                          init_linear_map(deriv.bands, c2, config.seed + 4));
            parts.push_back(&deriv_proj);
        }
        query = sum_feature_maps(parts);
        return 0;
    });
    {
        const auto p = dir / "features.hdr";
        write_cube(to_float_cube(feature_to_cube(semantic_c2)), p);
        add_artifact("features", p, hash_cube_artifact(p));
    }

    // cluster
    const ClusterResult clustered =
        run_stage("cluster", [&] { return cluster(semantic_c2, query, config.cluster); });
    {
        const auto p = dir / "assignment.pgm";
        write_assignment_pgm(clustered.assignment, p);
        add_artifact("assignment", p, hash_file(p));
    }

    // aggregate
    const SupertokenSet tokens = run_stage("aggregate", [&] {
        return aggregate_tokens(clustered.associations, clustered.assignment, semantic_c2,
                                clustered.centers);
    });
    {
        const auto p = dir / "tokens.hdr";
        write_matrix(tokens.features, tokens.count, tokens.dim, p);
        add_artifact("tokens", p, hash_cube_artifact(p));
    }

    // soft labels
    const SoftLabelMatrix soft = run_stage("soft-labels", [&] {
        return soft_labels(clustered.assignment, clustered.associations, labels,
                           config.num_classes, config.label_mode);
    });
    {
        const auto p = dir / "soft_labels.csv";
        write_soft_labels_csv(soft, p);
        add_artifact("soft-labels", p, hash_file(p));
    }

    // train
    const ClassifierParams params = run_stage("train", [&] {
        SoftLabelMatrix supervision = soft;
        if (config.hard_label_ablation) {
            const std::vector<uint16_t> hard = hard_labels(soft);
            std::fill(supervision.rows.begin(), supervision.rows.end(), 0.0);
            for (int m = 0; m < supervision.tokens; ++m)
                if (hard[m] != kIgnoreLabel) supervision.row(m)[hard[m]] = 1.0;
        }
        std::vector<TrainScene> scenes;
        scenes.push_back(TrainScene{token_matrix(tokens), std::move(supervision)});
        return train(scenes, config.train, c2, config.heads, config.blocks, config.num_classes);
    });
    {
        const auto p = dir / "checkpoint.bin";
        save_checkpoint(params, p);
        add_artifact("checkpoint", p, hash_file(p));
    }

    // predict
    const ClassMap prediction = run_stage("predict", [&] {
        const Mat probs = forward(tokens, params);
        return project_to_pixels(predict_token_classes(probs), clustered.assignment);
    });
    {
        const auto p = dir / "classmap.pgm";
        write_label_map(prediction, p);
        add_artifact("classmap", p, hash_file(p));
        if (!config.palette_path.empty()) {
            const auto ppm = dir / "classmap.ppm";
            write_class_map_ppm(prediction, read_palette(config.palette_path), ppm);
            add_artifact("classmap-rgb", ppm, hash_file(ppm));
        }
    }

    // eval
    run_stage("eval", [&] {
        const ConfusionMatrix cm = confusion(prediction, labels, config.num_classes);
        out.report = metrics(cm);
        const auto p = dir / "metrics.csv";
        write_metrics_csv(out.report, p);
        add_artifact("metrics", p, hash_file(p));
        return 0;
    });

    out.manifest_path = dir / "manifest.txt";
    std::ofstream mf(out.manifest_path);
    if (!mf) throw std::runtime_error("[manifest] cannot write " + out.manifest_path.string());
    for (const auto& e : out.manifest)
        mf << e.name << " " << e.path << " " << std::hex << e.hash << std::dec << "\n";
    return out;
}

BenchReport bench(const PipelineConfig& config, int repeats) {
    if (repeats < 1) throw std::runtime_error("bench repeats must be >= 1");
    config.validate_paths();
    const HsiCube cube = read_cube(config.cube_path);
    const size_t n = cube.pixels();
    const int c2 = config.feature_dim;
    const int d = cube.bands;
    const int step = config.derivative_step;

    struct Sample {
        double derive = 0, features = 0, clustering = 0, aggregation = 0, forward = 0, total = 0;
    };
    std::vector<Sample> samples(repeats);

    for (int r = 0; r < repeats; ++r) {
        Sample& s = samples[r];
        const auto t0 = Clock::now();

        auto t = Clock::now();
        CubeD deriv;
        if (config.use_derivative) deriv = first_derivative(cube, step);
        s.derive = elapsed_ms(t);

        t = Clock::now();
        const FeatureMap semantic = semantic_features(cube, config.provider);
        const FeatureMap semantic_c2 =
            project_features(semantic, init_linear_map(semantic.dim, c2, config.seed + 2));
        const FeatureMap spectral =
            project_features(to_feature_map(cube), init_linear_map(d, c2, config.seed + 3));
        std::vector<const FeatureMap*> parts = {&semantic_c2, &spectral};
        FeatureMap deriv_proj;
        if (config.use_derivative) {
            deriv_proj = project_features(to_feature_map(deriv),
                                          init_linear_map(deriv.bands, c2, config.seed + 4));
            parts.push_back(&deriv_proj);
        }
        const FeatureMap query = sum_feature_maps(parts);
        s.features = elapsed_ms(t);

        t = Clock::now();
        const ClusterResult clustered = cluster(semantic_c2, query, config.cluster);
        s.clustering = elapsed_ms(t);

        t = Clock::now();
        const SupertokenSet tokens = aggregate_tokens(clustered.associations,
                                                      clustered.assignment, semantic_c2,
                                                      clustered.centers);
        s.aggregation = elapsed_ms(t);

        t = Clock::now();
        const ClassifierParams params = init_classifier(c2, config.heads, config.blocks,
                                                        std::max(config.num_classes, 2),
                                                        config.seed);
        (void)forward(tokens, params);
        s.forward = elapsed_ms(t);

        s.total = elapsed_ms(t0);
    }

    auto median_of = [&](auto member) {
        std::vector<double> v(repeats);
        for (int r = 0; r < repeats; ++r) v[r] = samples[r].*member;
        std::sort(v.begin(), v.end());
        return repeats % 2 == 1 ? v[repeats / 2] : 0.5 * (v[repeats / 2 - 1] + v[repeats / 2]);
    };

    // analytic op counts: pure functions of the configuration
    const uint64_t window_sum = association_window_sum(cube.height, cube.width, config.cluster);
    const uint64_t m_total = static_cast<uint64_t>(config.cluster.total_centers());
    const uint64_t deriv_ops = config.use_derivative
                                   ? static_cast<uint64_t>(n) * (d - step) * 2
                                   : 0;
    const uint64_t proj_terms = 2 + (config.use_derivative ? 1 : 0);
    const uint64_t feature_ops =
        static_cast<uint64_t>(n) * 2 *
        (static_cast<uint64_t>(config.provider.dim) * d +      // provider map
         static_cast<uint64_t>(c2) * config.provider.dim +     // F_D -> C2
         static_cast<uint64_t>(c2) * d +                       // spectra -> C2
         (config.use_derivative ? static_cast<uint64_t>(c2) * (d - step) : 0)) +
        static_cast<uint64_t>(n) * c2 * (proj_terms - 1);      // query sum
    // per (pixel, windowed center): C2 subs, C2 mults, C2 adds, one exp
    const uint64_t assoc_ops =
        window_sum * (3ULL * c2 + 1) * (config.cluster.iterations + 1);
    const uint64_t update_ops =
        window_sum * (2ULL * c2 + 1) * config.cluster.iterations;
    const uint64_t agg_ops = static_cast<uint64_t>(n) * 2 * c2 + m_total * c2;
    const uint64_t mt = static_cast<uint64_t>(m_total);
    const uint64_t fwd_ops =
        static_cast<uint64_t>(config.blocks) *
            (24ULL * mt * c2 * c2 + 4ULL * mt * mt * c2) +
        2ULL * mt * c2 * std::max(config.num_classes, 2);

    BenchReport report;
    report.stages = {
        {"derivatives", median_of(&Sample::derive), deriv_ops},
        {"features", median_of(&Sample::features), feature_ops},
        {"clustering", median_of(&Sample::clustering), assoc_ops + update_ops},
        {"aggregation", median_of(&Sample::aggregation), agg_ops},
        {"forward", median_of(&Sample::forward), fwd_ops},
    };
    report.total_millis = median_of(&Sample::total);
    report.pixels_per_second =
        report.total_millis > 0.0 ? 1000.0 * static_cast<double>(n) / report.total_millis : 0.0;
    return report;
}

void write_metrics_csv(const MetricsReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "metric,value\n";
    out.precision(10);
    out << "oa," << report.oa << "\n"
        << "aa," << report.aa << "\n"
        << "kappa," << report.kappa << "\n"
        << "miou," << report.miou << "\n"
        << "cf1," << report.cf1 << "\n";
    for (size_t c = 0; c < report.f1.size(); ++c) out << "f1_" << c << "," << report.f1[c] << "\n";
}

void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (int g = 0; g < cm.classes; ++g) {
        for (int p = 0; p < cm.classes; ++p) {
            if (p) out << ",";
            out << cm.at(g, p);
        }
        out << "\n";
    }
}

void write_soft_labels_csv(const SoftLabelMatrix& labels, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.precision(12);
    for (int m = 0; m < labels.tokens; ++m) {
        out << (labels.valid[m] ? 1 : 0);
        for (int c = 0; c < labels.classes; ++c) out << "," << labels.row(m)[c];
        out << "\n";
    }
}

SoftLabelMatrix read_soft_labels_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> fields;
        size_t pos = 0;
        while (pos <= line.size()) {
            const size_t comma = line.find(',', pos);
            const std::string tok =
                line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            fields.push_back(std::stod(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw std::runtime_error("empty soft-label file: " + path.string());
    const size_t width = rows.front().size();
    if (width < 2) throw std::runtime_error("soft-label rows need validity + proportions");
    SoftLabelMatrix labels;
    labels.tokens = static_cast<int>(rows.size());
    labels.classes = static_cast<int>(width - 1);
    labels.rows.assign(static_cast<size_t>(labels.tokens) * labels.classes, 0.0);
    labels.valid.assign(labels.tokens, false);
    for (int m = 0; m < labels.tokens; ++m) {
        if (rows[m].size() != width)
            throw std::runtime_error("ragged soft-label row " + std::to_string(m));
        labels.valid[m] = rows[m][0] != 0.0;
        for (int c = 0; c < labels.classes; ++c) labels.row(m)[c] = rows[m][c + 1];
    }
    return labels;
}

void write_epoch_log_csv(const std::vector<EpochLog>& log, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "epoch,lr,loss\n";
    out.precision(12);
    for (const auto& e : log) out << e.epoch << "," << e.lr << "," << e.loss << "\n";
}

void write_assignment_pgm(const AssignmentMap& assignment, const std::filesystem::path& path) {
    LabelMap map(assignment.height, assignment.width);
    for (size_t i = 0; i < map.ids.size(); ++i) {
        if (assignment.center[i] < 0 || assignment.center[i] >= 65535)
            throw std::runtime_error("center index does not fit a 16-bit map");
        map.ids[i] = static_cast<uint16_t>(assignment.center[i]);
    }
    write_label_map(map, path);
}

}  // namespace sst
