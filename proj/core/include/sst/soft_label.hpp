#pragma once

#include <cstdint>
#include <vector>

#include "sst/cluster.hpp"
#include "sst/cube.hpp"

namespace sst {

enum class SoftLabelMode {
    HardCount,       // class-pixel counts within the token
    AssocWeighted,   // counts weighted by the pixel's association to the center
};

SoftLabelMode parse_soft_label_mode(const std::string& name);
std::string to_string(SoftLabelMode mode);

// Per-token class proportions. Rows of valid tokens are non-negative and sum
// to 1; tokens containing only ignore pixels are invalid and all-zero.
struct SoftLabelMatrix {
    int tokens = 0;
    int classes = 0;
    std::vector<double> rows;  // tokens x classes
    std::vector<bool> valid;

    double* row(int m) { return rows.data() + static_cast<size_t>(m) * classes; }
    const double* row(int m) const { return rows.data() + static_cast<size_t>(m) * classes; }
};

// Ignore pixels are excluded from both numerator and denominator.
SoftLabelMatrix soft_labels(const AssignmentMap& assignment, const AssociationMatrix& assoc,
                            const LabelMap& gt, int num_classes,
                            SoftLabelMode mode = SoftLabelMode::HardCount);

// Hard-count proportions without an association matrix (CLI path).
SoftLabelMatrix soft_labels_hard(const AssignmentMap& assignment, const LabelMap& gt,
                                 int num_tokens, int num_classes);

// Argmax per valid row, ties to the lowest class id; invalid tokens map to
// kIgnoreLabel.
std::vector<uint16_t> hard_labels(const SoftLabelMatrix& labels);

}  // namespace sst
