// Command-line frontend for the spectral supertoken pipeline.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sst/classifier.hpp"
#include "sst/cluster.hpp"
#include "sst/derivative.hpp"
#include "sst/eval.hpp"
#include "sst/features.hpp"
#include "sst/io.hpp"
#include "sst/pipeline.hpp"
#include "sst/soft_label.hpp"
#include "sst/synthetic.hpp"

namespace {

using namespace sst;

AssignmentMap read_assignment(const std::string& path) {
    const LabelMap map = read_label_map(path);
    AssignmentMap assignment;
    assignment.height = map.height;
    assignment.width = map.width;
    assignment.center.assign(map.ids.begin(), map.ids.end());
    return assignment;
}

SupertokenSet read_tokens(const std::string& path) {
    SupertokenSet tokens;
    tokens.features = read_matrix(path, tokens.count, tokens.dim);
    tokens.member_count.assign(tokens.count, 0);
    return tokens;
}

KeyValueConfig load_config(const std::string& config_path,
                           const std::vector<std::string>& overrides) {
    KeyValueConfig kv =
        config_path.empty() ? KeyValueConfig{} : KeyValueConfig::from_file(config_path);
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--set expects key=value, got '" + item + "'");
        kv.set(item.substr(0, eq), item.substr(eq + 1));
    }
    return kv;
}

int run(int argc, char** argv) {
    CLI::App app{"spectral supertoken classification pipeline"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic quadrant test scene");
    int sy_h = 64, sy_w = 64, sy_d = 16;
    double sy_noise = 0.05, sy_sep = 1.0;
    uint64_t sy_seed = 0;
    std::string sy_out = "scene";
    synth->add_option("--height", sy_h);
    synth->add_option("--width", sy_w);
    synth->add_option("--bands", sy_d);
    synth->add_option("--noise", sy_noise, "additive gaussian sigma");
    synth->add_option("--separation", sy_sep, "minimum pairwise L2 distance of class means");
    synth->add_option("--seed", sy_seed);
    synth->add_option("--output", sy_out, "output prefix (.hdr/.raw, _labels.pgm, _palette.txt)");
    synth->callback([&] {
        const SceneSpec spec = quadrant_scene(sy_h, sy_w, sy_d, sy_noise, sy_seed, sy_sep);
        auto [cube, labels] = make_synthetic_scene(spec);
        write_cube(cube, sy_out + ".hdr");
        write_label_map(labels, sy_out + "_labels.pgm");
        const Palette palette = {{230, 25, 75}, {60, 180, 75}, {255, 225, 25}, {0, 130, 200}};
        write_palette(palette, sy_out + "_palette.txt");
    });

    // derive
    auto* derive = app.add_subcommand("derive", "spectral derivative along the band axis");
    std::string de_in, de_out;
    int de_order = 1, de_step = 1;
    derive->add_option("--input", de_in)->required();
    derive->add_option("--order", de_order)->check(CLI::Range(1, 2));
    derive->add_option("--step", de_step);
    derive->add_option("--output", de_out)->required();
    derive->callback([&] {
        const HsiCube cube = read_cube(de_in);
        const CubeD result =
            de_order == 1 ? first_derivative(cube, de_step) : second_derivative(cube, de_step);
        write_cube(to_float_cube(result), de_out);
    });

    // features
    auto* features = app.add_subcommand("features", "per-pixel semantic feature provider");
    std::string fe_in, fe_out, fe_provider = "linear";
    int fe_dim = 32;
    uint64_t fe_seed = 0;
    features->add_option("--input", fe_in)->required();
    features->add_option("--provider", fe_provider)->check(CLI::IsMember({"linear", "local-avg"}));
    features->add_option("--dim", fe_dim);
    features->add_option("--seed", fe_seed);
    features->add_option("--output", fe_out)->required();
    features->callback([&] {
        const HsiCube cube = read_cube(fe_in);
        const FeatureMap fm = semantic_features(cube, ProviderConfig{fe_provider, fe_dim, fe_seed});
        write_cube(to_float_cube(feature_to_cube(fm)), fe_out);
    });

    // cluster
    auto* cl = app.add_subcommand("cluster", "supertoken clustering and aggregation");
    std::string cl_semantic, cl_query, cl_assignment = "assignment.pgm",
                cl_tokens = "tokens.hdr";
    ClusterConfig cl_cfg;
    cl->add_option("--semantic", cl_semantic, "semantic feature cube (C2 channels)")->required();
    cl->add_option("--query", cl_query, "association query cube; defaults to --semantic");
    cl->add_option("--grid", cl_cfg.grid);
    cl->add_option("--per-cell", cl_cfg.per_cell);
    cl->add_option("--iters", cl_cfg.iterations);
    cl->add_option("--knn", cl_cfg.knn);
    cl->add_option("--window", cl_cfg.window);
    cl->add_option("--threads", cl_cfg.threads);
    cl->add_option("--assignment", cl_assignment);
    cl->add_option("--tokens", cl_tokens);
    cl->callback([&] {
        const FeatureMap semantic = to_feature_map(read_cube(cl_semantic));
        const FeatureMap query =
            cl_query.empty() ? semantic : to_feature_map(read_cube(cl_query));
        const ClusterResult result = cluster(semantic, query, cl_cfg);
        write_assignment_pgm(result.assignment, cl_assignment);
        const SupertokenSet tokens =
            aggregate_tokens(result.associations, result.assignment, semantic, result.centers);
        write_matrix(tokens.features, tokens.count, tokens.dim, cl_tokens);
    });

    // soft-labels
    auto* sl = app.add_subcommand("soft-labels", "class-proportion labels per supertoken");
    std::string sl_assignment, sl_gt, sl_out = "soft_labels.csv", sl_mode = "hard-count";
    int sl_classes = 0, sl_tokens = 0;
    sl->add_option("--assignment", sl_assignment)->required();
    sl->add_option("--labels", sl_gt)->required();
    sl->add_option("--classes", sl_classes)->required();
    sl->add_option("--tokens", sl_tokens, "token count; defaults to max assignment index + 1");
    sl->add_option("--mode", sl_mode)->check(CLI::IsMember({"hard-count"}));
    sl->add_option("--output", sl_out);
    sl->callback([&] {
        const AssignmentMap assignment = read_assignment(sl_assignment);
        const LabelMap gt = read_label_map(sl_gt);
        int tokens = sl_tokens;
        if (tokens == 0)
            for (int c : assignment.center) tokens = std::max(tokens, c + 1);
        write_soft_labels_csv(soft_labels_hard(assignment, gt, tokens, sl_classes), sl_out);
    });

    // train
    auto* tr = app.add_subcommand("train", "train the token classifier");
    std::string tr_tokens, tr_labels, tr_ckpt = "checkpoint.bin", tr_log;
    int tr_dim = 32, tr_heads = 4, tr_blocks = 2, tr_classes = 0;
    TrainConfig tr_cfg;
    tr->add_option("--tokens", tr_tokens)->required();
    tr->add_option("--soft-labels", tr_labels)->required();
    tr->add_option("--classes", tr_classes)->required();
    tr->add_option("--dim", tr_dim);
    tr->add_option("--heads", tr_heads);
    tr->add_option("--blocks", tr_blocks);
    tr->add_option("--epochs", tr_cfg.epochs);
    tr->add_option("--batch", tr_cfg.batch);
    tr->add_option("--lr", tr_cfg.lr);
    tr->add_option("--lr-floor", tr_cfg.lr_floor);
    tr->add_option("--seed", tr_cfg.seed);
    tr->add_option("--checkpoint", tr_ckpt);
    tr->add_option("--log", tr_log, "training log CSV (epoch, lr, loss)");
    tr->callback([&] {
        std::vector<TrainScene> scenes;
        scenes.push_back(
            TrainScene{token_matrix(read_tokens(tr_tokens)), read_soft_labels_csv(tr_labels)});
        std::vector<EpochLog> log;
        const ClassifierParams params =
            train(scenes, tr_cfg, tr_dim, tr_heads, tr_blocks, tr_classes, &log);
        save_checkpoint(params, tr_ckpt);
        if (!tr_log.empty()) write_epoch_log_csv(log, tr_log);
    });

    // predict
    auto* pr = app.add_subcommand("predict", "classify tokens and project to pixels");
    std::string pr_tokens, pr_ckpt, pr_assignment, pr_out = "classmap.pgm", pr_palette, pr_ppm;
    pr->add_option("--tokens", pr_tokens)->required();
    pr->add_option("--checkpoint", pr_ckpt)->required();
    pr->add_option("--assignment", pr_assignment)->required();
    pr->add_option("--output", pr_out);
    pr->add_option("--palette", pr_palette);
    pr->add_option("--ppm", pr_ppm, "colorized output (requires --palette)");
    pr->callback([&] {
        const SupertokenSet tokens = read_tokens(pr_tokens);
        const ClassifierParams params = load_checkpoint(pr_ckpt);
        const Mat probs = forward(tokens, params);
        std::vector<uint16_t> classes(probs.rows, 0);
        for (int m = 0; m < probs.rows; ++m)
            for (int c = 1; c < probs.cols; ++c)
                if (probs.at(m, c) > probs.at(m, classes[m])) classes[m] = static_cast<uint16_t>(c);
        const ClassMap map = project_to_pixels(classes, read_assignment(pr_assignment));
        write_label_map(map, pr_out);
        if (!pr_ppm.empty()) write_class_map_ppm(map, read_palette(pr_palette), pr_ppm);
    });

    // eval
    auto* ev = app.add_subcommand("eval", "confusion matrix and metrics");
    std::string ev_pred, ev_gt, ev_metrics = "metrics.csv", ev_confusion = "confusion.csv";
    int ev_classes = 0;
    ev->add_option("--pred", ev_pred)->required();
    ev->add_option("--gt", ev_gt)->required();
    ev->add_option("--classes", ev_classes)->required();
    ev->add_option("--metrics", ev_metrics);
    ev->add_option("--confusion", ev_confusion);
    ev->callback([&] {
        const ConfusionMatrix cm =
            confusion(read_label_map(ev_pred), read_label_map(ev_gt), ev_classes);
        const MetricsReport report = metrics(cm);
        write_metrics_csv(report, ev_metrics);
        write_confusion_csv(cm, ev_confusion);
        std::printf("oa %.6f aa %.6f kappa %.6f miou %.6f cf1 %.6f\n", report.oa, report.aa,
                    report.kappa, report.miou, report.cf1);
    });

    // pipeline
    auto* pl = app.add_subcommand("pipeline", "run every stage end to end");
    std::string pl_config;
    std::vector<std::string> pl_set;
    pl->add_option("--config", pl_config, "key = value config file");
    pl->add_option("--set", pl_set, "override config entries, key=value");
    pl->callback([&] {
        const PipelineConfig cfg = PipelineConfig::from_config(load_config(pl_config, pl_set));
        const PipelineOutput out = run_pipeline(cfg);
        for (const auto& e : out.manifest)
            std::printf("%s %s %016llx\n", e.name.c_str(), e.path.c_str(),
                        static_cast<unsigned long long>(e.hash));
        std::printf("oa %.6f kappa %.6f\n", out.report.oa, out.report.kappa);
    });

    // bench
    auto* be = app.add_subcommand("bench", "stage timings and arithmetic-op counters");
    std::string be_config;
    std::vector<std::string> be_set;
    int be_repeats = 3;
    be->add_option("--config", be_config);
    be->add_option("--set", be_set, "override config entries, key=value");
    be->add_option("--repeats", be_repeats);
    be->callback([&] {
        const PipelineConfig cfg = PipelineConfig::from_config(load_config(be_config, be_set));
        const BenchReport report = bench(cfg, be_repeats);
        for (const auto& s : report.stages)
            std::printf("%-12s %10.3f ms %16llu ops\n", s.stage.c_str(), s.millis,
                        static_cast<unsigned long long>(s.arithmetic_ops));
        std::printf("total %.3f ms, %.1f pixels/s\n", report.total_millis,
                    report.pixels_per_second);
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
