// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "sst/classifier.hpp"
#include "sst/cluster.hpp"
#include "sst/derivative.hpp"
#include "sst/eval.hpp"
#include "sst/features.hpp"
#include "sst/io.hpp"
#include "sst/pipeline.hpp"
#include "sst/rng.hpp"
#include "sst/soft_label.hpp"
#include "sst/synthetic.hpp"

using namespace sst;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

CubeD random_cube(Rng& rng, int h, int w, int d) {
    CubeD c(h, w, d);
    for (auto& v : c.data) v = rng.uniform(-4.0, 4.0);
    return c;
}

FeatureMap random_features(Rng& rng, int h, int w, int dim) {
    FeatureMap fm(h, w, dim);
    for (auto& v : fm.rows) v = rng.uniform(-1.0, 1.0);
    return fm;
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "sst_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// ---- criterion 1: derivative properties over 1000 random cubes ----
void criterion_1() {
    const auto t0 = clock_type::now();
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int h = 1 + static_cast<int>(rng.next_below(8));
        const int w = 1 + static_cast<int>(rng.next_below(8));
        const int d = 3 + static_cast<int>(rng.next_below(14));  // 3..16 bands
        const CubeD x = random_cube(rng, h, w, d);
        const CubeD y = random_cube(rng, h, w, d);
        const int step = 1 + static_cast<int>(rng.next_below((d - 1) / 2));
        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);

        // linearity
        CubeD mix(h, w, d);
        for (size_t i = 0; i < mix.data.size(); ++i) mix.data[i] = a * x.data[i] + b * y.data[i];
        const CubeD dm = first_derivative(mix, step);
        const CubeD dx = first_derivative(x, step);
        const CubeD dy = first_derivative(y, step);
        for (size_t i = 0; i < dm.data.size(); ++i)
            worst = std::max(worst, std::fabs(dm.data[i] - (a * dx.data[i] + b * dy.data[i])));

        // constant spectra -> zero
        CubeD flat(h, w, d);
        for (int band = 0; band < d; ++band)
            for (int yy = 0; yy < h; ++yy)
                for (int xx = 0; xx < w; ++xx) flat.at(band, yy, xx) = x.at(0, yy, xx);
        for (double v : first_derivative(flat, step).data) worst = std::max(worst, std::fabs(v));
        for (double v : second_derivative(flat, step).data) worst = std::max(worst, std::fabs(v));

        // second derivative = first(first) at the same step
        const CubeD direct = second_derivative(x, step);
        const CubeD chained = first_derivative(first_derivative(x, step), step);
        for (size_t i = 0; i < direct.data.size(); ++i)
            worst = std::max(worst, std::fabs(direct.data[i] - chained.data[i]));
    }
    const double secs = seconds_since(t0);
    report(1, worst <= 1e-12 && secs < 5.0,
           "derivative properties, 1000 cubes: max err " + std::to_string(worst) + ", " +
               std::to_string(secs) + " s");
}

// ---- criterion 2: windowed association / center update vs dense oracles ----
void criterion_2() {
    Rng rng(202);
    double worst_assoc = 0.0, worst_update = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int h = 6 + static_cast<int>(rng.next_below(11));  // 6..16
        const int w = 6 + static_cast<int>(rng.next_below(11));
        const int dim = 2 + static_cast<int>(rng.next_below(4));
        ClusterConfig cfg;
        cfg.grid = 2;
        cfg.per_cell = 1 + static_cast<int>(rng.next_below(2));  // up to 8 centers
        cfg.knn = 3;
        cfg.window = 2;  // full coverage of the 2x2 grid
        const FeatureMap q = random_features(rng, h, w, dim);
        const CentroidSet cs = init_centroids(q, cfg);
        const AssociationMatrix a = compute_associations(q, cs, cfg);
        for (size_t i = 0; i < a.pixels; ++i)
            for (int j = 0; j < cs.count; ++j) {
                double d2 = 0.0;
                for (int k = 0; k < dim; ++k) {
                    const double diff = q.row(i)[k] - cs.feature(j)[k];
                    d2 += diff * diff;
                }
                worst_assoc = std::max(worst_assoc, std::fabs(a.at_dense(i, j) - std::exp(-d2)));
            }
        const CentroidSet next = update_centers(a, q, cs);
        for (int j = 0; j < cs.count; ++j) {
            double col = 0.0;
            for (size_t i = 0; i < a.pixels; ++i) col += a.at_dense(i, j);
            for (int k = 0; k < dim; ++k) {
                double acc = 0.0;
                for (size_t i = 0; i < a.pixels; ++i) acc += a.at_dense(i, j) / col * q.row(i)[k];
                worst_update = std::max(worst_update, std::fabs(next.feature(j)[k] - acc));
            }
        }
    }
    report(2, worst_assoc <= 1e-12 && worst_update <= 1e-12,
           "dense clustering oracles, 100 instances: assoc err " + std::to_string(worst_assoc) +
               ", update err " + std::to_string(worst_update));
}

// ---- criterion 3: structural token counts ----
void criterion_3() {
    bool ok = true;
    std::string detail;
    Rng rng(303);
    for (const auto [h, w] : {std::pair{32, 32}, std::pair{33, 47}, std::pair{64, 64}}) {
        ClusterConfig cfg;
        cfg.grid = 16;
        cfg.per_cell = 4;
        cfg.iterations = 1;
        const FeatureMap q = random_features(rng, h, w, 3);
        const ClusterResult res = cluster(q, q, cfg);
        if (res.centers.count != 1024) {
            ok = false;
            detail += " " + std::to_string(h) + "x" + std::to_string(w) + "->" +
                      std::to_string(res.centers.count);
        }
    }
    const FeatureMap big = random_features(rng, 128, 128, 2);
    for (int grid : {4, 8, 16, 32})
        for (int per_cell : {1, 4, 9, 16}) {
            ClusterConfig cfg;
            cfg.grid = grid;
            cfg.per_cell = per_cell;
            const CentroidSet cs = init_centroids(big, cfg);
            if (cs.count != grid * grid * per_cell) {
                ok = false;
                detail += " F=" + std::to_string(grid) + ",M=" + std::to_string(per_cell);
            }
        }
    report(3, ok, ok ? "1024 tokens at F=16,M=4; ablation grid counts exact"
                     : "count mismatches:" + detail);
}

// ---- criterion 4: soft-label stochasticity on 1000 random assignments ----
void criterion_4() {
    Rng rng(404);
    double worst_sum = 0.0;
    bool exact = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 4 + static_cast<int>(rng.next_below(60));
        const int tokens = 1 + static_cast<int>(rng.next_below(8));
        const int classes = 2 + static_cast<int>(rng.next_below(6));
        AssignmentMap assign;
        assign.height = 1;
        assign.width = n;
        assign.center.resize(n);
        LabelMap gt(1, n);
        for (int i = 0; i < n; ++i) {
            assign.center[i] = static_cast<int>(rng.next_below(tokens));
            gt.ids[i] = rng.next_below(7) == 0 ? kIgnoreLabel
                                               : static_cast<uint16_t>(rng.next_below(classes));
        }
        const SoftLabelMatrix sl = soft_labels_hard(assign, gt, tokens, classes);
        std::vector<uint64_t> hist(static_cast<size_t>(tokens) * classes, 0);
        std::vector<uint64_t> tot(tokens, 0);
        for (int i = 0; i < n; ++i) {
            if (gt.ids[i] == kIgnoreLabel) continue;
            ++hist[static_cast<size_t>(assign.center[i]) * classes + gt.ids[i]];
            ++tot[assign.center[i]];
        }
        for (int m = 0; m < tokens; ++m) {
            if (!sl.valid[m]) {
                if (tot[m] != 0) exact = false;
                continue;
            }
            double sum = 0.0;
            for (int c = 0; c < classes; ++c) {
                sum += sl.row(m)[c];
                const double want = static_cast<double>(hist[static_cast<size_t>(m) * classes + c]) /
                                    static_cast<double>(tot[m]);
                if (sl.row(m)[c] != want) exact = false;  // hard-count mode, exact division
            }
            worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
        }
    }
    report(4, exact && worst_sum <= 1e-9,
           "1000 random assignments: histogram oracle " + std::string(exact ? "exact" : "MISMATCH") +
               ", worst row-sum err " + std::to_string(worst_sum));
}

// ---- criterion 5: gradient fidelity ----
void criterion_5() {
    const auto t0 = clock_type::now();
    const ClassifierParams params = init_classifier(32, 4, 2, 5, 505);
    Rng rng(506);
    Mat tokens(16, 32);
    for (auto& v : tokens.v) v = rng.uniform(-1.0, 1.0);
    SoftLabelMatrix labels;
    labels.tokens = 16;
    labels.classes = 5;
    labels.rows.resize(80);
    labels.valid.assign(16, true);
    for (int m = 0; m < 16; ++m) {
        double sum = 0.0;
        for (int c = 0; c < 5; ++c) {
            labels.row(m)[c] = rng.uniform(0.05, 1.0);
            sum += labels.row(m)[c];
        }
        for (int c = 0; c < 5; ++c) labels.row(m)[c] /= sum;
    }
    const GradCheckReport rep = grad_check(params, tokens, labels, 250, 1e-5, 507);
    const double secs = seconds_since(t0);
    report(5, rep.coords >= 200 && rep.max_rel_err <= 1e-5 && secs < 30.0,
           std::to_string(rep.coords) + " coords, max rel err " +
               std::to_string(rep.max_rel_err) + ", " + std::to_string(secs) + " s");
}

// ---- criterion 6: attention contracts on 100 random token sets ----
void criterion_6() {
    Rng rng(606);
    double worst_row = 0.0, worst_perm = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(rng.next_below(13));
        const ClassifierParams params = init_classifier(16, 4, 2, 4, 600 + trial);
        Mat tokens(n, 16);
        for (auto& v : tokens.v) v = rng.uniform(-1.5, 1.5);

        for (const Mat& attn : attention_maps(tokens, params))
            for (int i = 0; i < attn.rows; ++i) {
                double sum = 0.0;
                for (int j = 0; j < attn.cols; ++j) sum += attn.at(i, j);
                worst_row = std::max(worst_row, std::fabs(sum - 1.0));
            }

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.next_below(static_cast<uint64_t>(i) + 1)]);
        Mat shuffled(n, 16);
        for (int i = 0; i < n; ++i)
            std::copy(tokens.row(perm[i]), tokens.row(perm[i]) + 16, shuffled.row(i));
        const Mat a = forward(tokens, params);
        const Mat b = forward(shuffled, params);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < 4; ++c)
                worst_perm = std::max(worst_perm, std::fabs(b.at(i, c) - a.at(perm[i], c)));
    }
    report(6, worst_row <= 1e-9 && worst_perm <= 1e-9,
           "100 token sets: row-sum err " + std::to_string(worst_row) +
               ", permutation err " + std::to_string(worst_perm));
}

PipelineConfig scene_config(const fs::path& dir) {
    auto [cube, labels] = make_synthetic_scene(quadrant_scene(64, 64, 16, 0.05, 707, 1.0));
    write_cube(cube, dir / "scene.hdr");
    write_label_map(labels, dir / "gt.pgm");
    PipelineConfig cfg;
    cfg.cube_path = dir / "scene.hdr";
    cfg.labels_path = dir / "gt.pgm";
    cfg.output_dir = dir / "out";
    cfg.provider = {"linear", 32, 708};
    cfg.cluster.grid = 8;
    cfg.cluster.per_cell = 1;
    cfg.cluster.iterations = 4;
    cfg.cluster.threads = 1;
    cfg.feature_dim = 32;
    cfg.heads = 4;
    cfg.blocks = 2;
    cfg.num_classes = 4;
    cfg.train.epochs = 200;
    cfg.train.lr = 1e-3;
    cfg.seed = 707;
    return cfg;
}

// ---- criteria 7, 8, 10, 11 share the 64x64 synthetic scene ----
void criteria_7_8_10_11() {
    const auto dir = fresh_dir("e2e");
    const PipelineConfig cfg = scene_config(dir);

    const auto t0 = clock_type::now();
    const PipelineOutput run1 = run_pipeline(cfg);
    const double secs = seconds_since(t0);
    report(7, run1.report.oa >= 0.95 && run1.report.kappa >= 0.93 && secs < 60.0,
           "64x64 scene: OA " + std::to_string(run1.report.oa) + ", kappa " +
               std::to_string(run1.report.kappa) + ", " + std::to_string(secs) + " s");

    // criterion 8: every pixel of a token shares its predicted class
    {
        const LabelMap assignment = read_label_map(cfg.output_dir / "assignment.pgm");
        const ClassMap pred = read_label_map(cfg.output_dir / "classmap.pgm");
        std::vector<int> token_class(cfg.cluster.total_centers(), -1);
        bool consistent = true;
        for (size_t i = 0; i < assignment.ids.size(); ++i) {
            const int token = assignment.ids[i];
            if (token_class[token] == -1)
                token_class[token] = pred.ids[i];
            else if (token_class[token] != pred.ids[i])
                consistent = false;
        }
        report(8, consistent, consistent ? "all pixels of each supertoken share one class"
                                         : "found a split supertoken");
    }

    // criterion 10: re-run with the same seed, manifests byte-identical
    {
        std::ifstream m1(run1.manifest_path, std::ios::binary);
        const std::string bytes1((std::istreambuf_iterator<char>(m1)),
                                 std::istreambuf_iterator<char>());
        const PipelineOutput run2 = run_pipeline(cfg);
        std::ifstream m2(run2.manifest_path, std::ios::binary);
        const std::string bytes2((std::istreambuf_iterator<char>(m2)),
                                 std::istreambuf_iterator<char>());
        report(10, !bytes1.empty() && bytes1 == bytes2,
               "repeat run manifest " + std::string(bytes1 == bytes2 ? "matches" : "DIFFERS"));
    }

    // criterion 11: ablation directions
    {
        PipelineConfig hard = cfg;
        hard.output_dir = dir / "out_hard";
        hard.hard_label_ablation = true;
        const double oa_hard = run_pipeline(hard).report.oa;

        PipelineConfig no_deriv = cfg;
        no_deriv.output_dir = dir / "out_noderiv";
        no_deriv.use_derivative = false;
        const double oa_no_deriv = run_pipeline(no_deriv).report.oa;

        const bool soft_ok = run1.report.oa >= oa_hard;
        const bool deriv_ok = run1.report.oa >= oa_no_deriv - 0.01;
        report(11, soft_ok && deriv_ok,
               "soft OA " + std::to_string(run1.report.oa) + " vs hard " + std::to_string(oa_hard) +
                   "; with-derivative vs without " + std::to_string(oa_no_deriv));
    }
}

// ---- criterion 9: metrics golden values ----
void criterion_9() {
    ConfusionMatrix cm(2);
    cm.at(0, 0) = 2;
    cm.at(0, 1) = 1;
    cm.at(1, 0) = 0;
    cm.at(1, 1) = 3;
    const MetricsReport r = metrics(cm);
    bool ok = std::fabs(r.oa - 0.8333) <= 1e-4 && std::fabs(r.kappa - 0.6667) <= 1e-4 &&
              std::fabs(r.miou - 0.7083) <= 1e-4 && std::fabs(r.f1[0] - 0.8) <= 1e-4 &&
              std::fabs(r.f1[1] - 0.8571) <= 1e-4;

    ConfusionMatrix perfect(3);
    for (int c = 0; c < 3; ++c) perfect.at(c, c) = 5;
    const MetricsReport p = metrics(perfect);
    ok = ok && p.oa == 1.0 && p.aa == 1.0 && p.kappa == 1.0 && p.miou == 1.0 && p.cf1 == 1.0;
    report(9, ok,
           "golden CM: OA " + std::to_string(r.oa) + ", kappa " + std::to_string(r.kappa) +
               ", mIoU " + std::to_string(r.miou) + "; perfect CM all 1");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_9();
    criteria_7_8_10_11();
    if (g_failures == 0) {
        std::printf("acceptance: all 11 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
