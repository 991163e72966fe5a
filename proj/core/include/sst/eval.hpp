#pragma once

#include <cstdint>
#include <vector>

#include "sst/cluster.hpp"
#include "sst/cube.hpp"

namespace sst {

// Rows are ground truth, columns are predictions; ignore pixels excluded.
struct ConfusionMatrix {
    int classes = 0;
    std::vector<uint64_t> counts;  // classes x classes

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int c) : classes(c), counts(static_cast<size_t>(c) * c, 0) {}

    uint64_t& at(int gt, int pred) { return counts[static_cast<size_t>(gt) * classes + pred]; }
    uint64_t at(int gt, int pred) const { return counts[static_cast<size_t>(gt) * classes + pred]; }
    uint64_t total() const;
};

struct MetricsReport {
    double oa = 0.0;     // overall accuracy
    double aa = 0.0;     // mean per-class recall
    double kappa = 0.0;
    double miou = 0.0;
    double cf1 = 0.0;    // mean F1 over classes with ground-truth support
    std::vector<double> f1;  // per class; 0 where precision + recall = 0
};

// ClassMap(i) = token_classes[assignment(i)]. Every pixel of a token shares
// its class by construction.
ClassMap project_to_pixels(const std::vector<uint16_t>& token_classes,
                           const AssignmentMap& assignment);

struct PatchResult {
    ClassMap map;
    int row_offset = 0;
    int col_offset = 0;
};

// Per-pixel majority vote over all patches covering the pixel, ties broken
// by the lowest class id. Throws if any output pixel is uncovered.
ClassMap patch_vote(const std::vector<PatchResult>& patches, int height, int width);

ConfusionMatrix confusion(const ClassMap& pred, const LabelMap& gt, int num_classes);

// OA = trace/total; AA = mean recall; kappa = (OA - p_e)/(1 - p_e); IoU_c =
// TP/(TP+FP+FN); mIoU and CF1 average over classes with ground-truth
// support. Degenerate p_e = 1: kappa is 1 when OA = 1, else 0.
MetricsReport metrics(const ConfusionMatrix& cm);

}  // namespace sst
