#include "sst/eval.hpp"

#include <stdexcept>
#include <string>

namespace sst {

uint64_t ConfusionMatrix::total() const {
    uint64_t t = 0;
    for (uint64_t c : counts) t += c;
    return t;
}

ClassMap project_to_pixels(const std::vector<uint16_t>& token_classes,
                           const AssignmentMap& assignment) {
    ClassMap map(assignment.height, assignment.width);
    for (size_t i = 0; i < assignment.count(); ++i) {
        const int j = assignment.center[i];
        if (j < 0 || static_cast<size_t>(j) >= token_classes.size())
            throw std::runtime_error("token index " + std::to_string(j) + " out of range");
        map.ids[i] = token_classes[j];
    }
    return map;
}

ClassMap patch_vote(const std::vector<PatchResult>& patches, int height, int width) {
    // votes[pixel][class] would be sparse; tally per pixel with a small map
    std::vector<std::vector<std::pair<uint16_t, int>>> votes(
        static_cast<size_t>(height) * width);
    for (const auto& p : patches) {
        for (int y = 0; y < p.map.height; ++y) {
            const int gy = p.row_offset + y;
            if (gy < 0 || gy >= height) throw std::runtime_error("patch exceeds output bounds");
            for (int x = 0; x < p.map.width; ++x) {
                const int gx = p.col_offset + x;
                if (gx < 0 || gx >= width)
                    throw std::runtime_error("patch exceeds output bounds");
                auto& tally = votes[static_cast<size_t>(gy) * width + gx];
                const uint16_t cls = p.map.at(y, x);
                bool found = false;
                for (auto& [c, n] : tally)
                    if (c == cls) {
                        ++n;
                        found = true;
                        break;
                    }
                if (!found) tally.emplace_back(cls, 1);
            }
        }
    }
    ClassMap out(height, width);
    for (size_t i = 0; i < votes.size(); ++i) {
        if (votes[i].empty())
            throw std::runtime_error("pixel " + std::to_string(i) + " covered by no patch");
        uint16_t best_cls = votes[i][0].first;
        int best_n = votes[i][0].second;
        for (const auto& [c, n] : votes[i])
            if (n > best_n || (n == best_n && c < best_cls)) {
                best_cls = c;
                best_n = n;
            }
        out.ids[i] = best_cls;
    }
    return out;
}

ConfusionMatrix confusion(const ClassMap& pred, const LabelMap& gt, int num_classes) {
    if (pred.height != gt.height || pred.width != gt.width)
        throw std::runtime_error("prediction / ground truth dimension mismatch");
    ConfusionMatrix cm(num_classes);
    for (size_t i = 0; i < gt.ids.size(); ++i) {
        const uint16_t g = gt.ids[i];
        if (g == kIgnoreLabel) continue;
        const uint16_t p = pred.ids[i];
        if (g >= num_classes || p >= num_classes)
            throw std::runtime_error("class id out of range in confusion matrix");
        ++cm.at(g, p);
    }
    return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
    const uint64_t total = cm.total();
    if (total == 0) throw std::runtime_error("empty confusion matrix");
    const int classes = cm.classes;

    std::vector<uint64_t> row_sum(classes, 0), col_sum(classes, 0);
    uint64_t trace = 0;
    for (int g = 0; g < classes; ++g)
        for (int p = 0; p < classes; ++p) {
            row_sum[g] += cm.at(g, p);
            col_sum[p] += cm.at(g, p);
            if (g == p) trace += cm.at(g, p);
        }

    MetricsReport report;
    report.oa = static_cast<double>(trace) / total;

    double pe = 0.0;
    for (int c = 0; c < classes; ++c)
        pe += static_cast<double>(row_sum[c]) * col_sum[c] / (static_cast<double>(total) * total);
    if (pe >= 1.0) {
        report.kappa = report.oa == 1.0 ? 1.0 : 0.0;
    } else {
        report.kappa = (report.oa - pe) / (1.0 - pe);
    }

    report.f1.assign(classes, 0.0);
    double recall_sum = 0.0, iou_sum = 0.0, f1_sum = 0.0;
    int supported = 0;
    for (int c = 0; c < classes; ++c) {
        const double tp = static_cast<double>(cm.at(c, c));
        const double fn = static_cast<double>(row_sum[c]) - tp;
        const double fp = static_cast<double>(col_sum[c]) - tp;
        const double precision = (tp + fp) > 0.0 ? tp / (tp + fp) : 0.0;
        const double recall = row_sum[c] > 0 ? tp / row_sum[c] : 0.0;
        report.f1[c] = (precision + recall) > 0.0
                           ? 2.0 * precision * recall / (precision + recall)
                           : 0.0;
        if (row_sum[c] > 0) {
            ++supported;
            recall_sum += recall;
            iou_sum += (tp + fp + fn) > 0.0 ? tp / (tp + fp + fn) : 0.0;
            f1_sum += report.f1[c];
        }
    }
    if (supported == 0) throw std::runtime_error("no supported classes");
    report.aa = recall_sum / supported;
    report.miou = iou_sum / supported;
    report.cf1 = f1_sum / supported;
    return report;
}

}  // namespace sst
