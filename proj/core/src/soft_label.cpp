#include "sst/soft_label.hpp"

#include <stdexcept>
#include <string>

namespace sst {

SoftLabelMode parse_soft_label_mode(const std::string& name) {
    if (name == "hard-count") return SoftLabelMode::HardCount;
    if (name == "assoc-weighted") return SoftLabelMode::AssocWeighted;
    throw std::runtime_error("unknown soft-label mode '" + name + "'");
}

std::string to_string(SoftLabelMode mode) {
    return mode == SoftLabelMode::HardCount ? "hard-count" : "assoc-weighted";
}

namespace {

SoftLabelMatrix soft_labels_impl(const AssignmentMap& assignment, const AssociationMatrix* assoc,
                                 const LabelMap& gt, int num_tokens, int num_classes,
                                 SoftLabelMode mode) {
    if (assignment.height != gt.height || assignment.width != gt.width)
        throw std::runtime_error("assignment / ground truth dimension mismatch");
    if (num_classes < 1) throw std::runtime_error("num_classes must be >= 1");

    SoftLabelMatrix labels;
    labels.tokens = num_tokens;
    labels.classes = num_classes;
    labels.rows.assign(static_cast<size_t>(labels.tokens) * num_classes, 0.0);
    labels.valid.assign(labels.tokens, false);

    const size_t n = assignment.count();
    for (size_t i = 0; i < n; ++i) {
        const uint16_t cls = gt.ids[i];
        if (cls == kIgnoreLabel) continue;
        if (cls >= num_classes)
            throw std::runtime_error("class id " + std::to_string(cls) +
                                     " >= num_classes = " + std::to_string(num_classes));
        const int m = assignment.center[i];
        if (m < 0 || m >= num_tokens)
            throw std::runtime_error("assignment index out of range");
        const double w =
            mode == SoftLabelMode::HardCount ? 1.0 : assoc->at_dense(i, m);
        labels.row(m)[cls] += w;
    }
    for (int m = 0; m < labels.tokens; ++m) {
        double total = 0.0;
        for (int c = 0; c < num_classes; ++c) total += labels.row(m)[c];
        if (total > 0.0) {
            labels.valid[m] = true;
            for (int c = 0; c < num_classes; ++c) labels.row(m)[c] /= total;
        }
    }
    return labels;
}

}  // namespace

SoftLabelMatrix soft_labels(const AssignmentMap& assignment, const AssociationMatrix& assoc,
                            const LabelMap& gt, int num_classes, SoftLabelMode mode) {
    return soft_labels_impl(assignment, &assoc, gt, assoc.centers, num_classes, mode);
}

SoftLabelMatrix soft_labels_hard(const AssignmentMap& assignment, const LabelMap& gt,
                                 int num_tokens, int num_classes) {
    return soft_labels_impl(assignment, nullptr, gt, num_tokens, num_classes,
                            SoftLabelMode::HardCount);
}

std::vector<uint16_t> hard_labels(const SoftLabelMatrix& labels) {
    std::vector<uint16_t> out(labels.tokens, kIgnoreLabel);
    for (int m = 0; m < labels.tokens; ++m) {
        if (!labels.valid[m]) continue;
        int best = 0;
        for (int c = 1; c < labels.classes; ++c)
            if (labels.row(m)[c] > labels.row(m)[best]) best = c;
        out[m] = static_cast<uint16_t>(best);
    }
    return out;
}

}  // namespace sst
