#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sst/rng.hpp"
#include "sst/soft_label.hpp"

using namespace sst;

namespace {

AssignmentMap make_assignment(int h, int w, std::vector<int> centers) {
    AssignmentMap m;
    m.height = h;
    m.width = w;
    m.center = std::move(centers);
    return m;
}

}  // namespace

TEST_CASE("frozen hard-count proportions: labels [1,1,2] over one token") {
    const AssignmentMap assign = make_assignment(1, 3, {0, 0, 0});
    LabelMap gt(1, 3);
    gt.ids = {1, 1, 2};
    const SoftLabelMatrix sl = soft_labels_hard(assign, gt, 1, 4);
    REQUIRE(sl.tokens == 1);
    REQUIRE(sl.classes == 4);
    CHECK(sl.valid[0]);
    CHECK(sl.row(0)[0] == 0.0);
    CHECK(sl.row(0)[1] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(sl.row(0)[2] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(sl.row(0)[3] == 0.0);
}

TEST_CASE("frozen association-weighted proportions: weights 0.5 and 0.25") {
    const AssignmentMap assign = make_assignment(1, 2, {0, 0});
    LabelMap gt(1, 2);
    gt.ids = {0, 1};
    AssociationMatrix a;
    a.pixels = 2;
    a.centers = 1;
    a.row_offsets = {0, 1, 2};
    a.center_index = {0, 0};
    a.weight = {0.5, 0.25};
    const SoftLabelMatrix sl = soft_labels(assign, a, gt, 2, SoftLabelMode::AssocWeighted);
    CHECK(sl.row(0)[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(sl.row(0)[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("ignore pixels are excluded; all-ignore tokens are invalid and zero") {
    const AssignmentMap assign = make_assignment(1, 4, {0, 0, 1, 1});
    LabelMap gt(1, 4);
    gt.ids = {2, kIgnoreLabel, kIgnoreLabel, kIgnoreLabel};
    const SoftLabelMatrix sl = soft_labels_hard(assign, gt, 2, 3);
    CHECK(sl.valid[0]);
    CHECK(sl.row(0)[2] == 1.0);
    CHECK_FALSE(sl.valid[1]);
    for (int c = 0; c < 3; ++c) CHECK(sl.row(1)[c] == 0.0);
}

TEST_CASE("valid rows are a probability simplex; oracle histogram agrees") {
    Rng rng(404);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 4 + static_cast<int>(rng.next_below(29));
        const int tokens = 1 + static_cast<int>(rng.next_below(6));
        const int classes = 2 + static_cast<int>(rng.next_below(5));
        AssignmentMap assign = make_assignment(1, n, std::vector<int>(n));
        LabelMap gt(1, n);
        for (int i = 0; i < n; ++i) {
            assign.center[i] = static_cast<int>(rng.next_below(tokens));
            gt.ids[i] = rng.next_below(8) == 0 ? kIgnoreLabel
                                               : static_cast<uint16_t>(rng.next_below(classes));
        }
        const SoftLabelMatrix sl = soft_labels_hard(assign, gt, tokens, classes);

        // exact integer histogram oracle
        std::vector<uint64_t> hist(static_cast<size_t>(tokens) * classes, 0);
        std::vector<uint64_t> tot(tokens, 0);
        for (int i = 0; i < n; ++i) {
            if (gt.ids[i] == kIgnoreLabel) continue;
            ++hist[static_cast<size_t>(assign.center[i]) * classes + gt.ids[i]];
            ++tot[assign.center[i]];
        }
        for (int m = 0; m < tokens; ++m) {
            CHECK(sl.valid[m] == (tot[m] > 0));
            double row_sum = 0.0;
            for (int c = 0; c < classes; ++c) {
                const double v = sl.row(m)[c];
                CHECK(v >= 0.0);
                row_sum += v;
                const double want =
                    tot[m] == 0 ? 0.0
                                : static_cast<double>(hist[static_cast<size_t>(m) * classes + c]) /
                                      static_cast<double>(tot[m]);
                CHECK(std::fabs(v - want) <= 1e-12);
            }
            if (sl.valid[m]) CHECK(std::fabs(row_sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("association-weighted rows also sum to one") {
    Rng rng(9);
    const int n = 12, tokens = 3, classes = 4;
    AssignmentMap assign = make_assignment(1, n, std::vector<int>(n));
    LabelMap gt(1, n);
    AssociationMatrix a;
    a.pixels = n;
    a.centers = tokens;
    a.row_offsets.resize(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        assign.center[i] = static_cast<int>(rng.next_below(tokens));
        gt.ids[i] = static_cast<uint16_t>(rng.next_below(classes));
        a.row_offsets[i + 1] = a.row_offsets[i] + 1;
        a.center_index.push_back(assign.center[i]);
        a.weight.push_back(rng.uniform(0.01, 1.0));
    }
    const SoftLabelMatrix sl = soft_labels(assign, a, gt, classes, SoftLabelMode::AssocWeighted);
    for (int m = 0; m < tokens; ++m) {
        if (!sl.valid[m]) continue;
        double s = 0.0;
        for (int c = 0; c < classes; ++c) s += sl.row(m)[c];
        CHECK(std::fabs(s - 1.0) <= 1e-12);
    }
}

TEST_CASE("hard labels take the row argmax, ties to the lowest class") {
    SoftLabelMatrix sl;
    sl.tokens = 3;
    sl.classes = 3;
    sl.rows = {0.2, 0.5, 0.3, 0.4, 0.4, 0.2, 0.0, 0.0, 0.0};
    sl.valid = {true, true, false};
    const std::vector<uint16_t> hard = hard_labels(sl);
    CHECK(hard[0] == 1);
    CHECK(hard[1] == 0);
    CHECK(hard[2] == kIgnoreLabel);
}

TEST_CASE("mode names parse and roundtrip") {
    CHECK(parse_soft_label_mode("hard-count") == SoftLabelMode::HardCount);
    CHECK(parse_soft_label_mode("assoc-weighted") == SoftLabelMode::AssocWeighted);
    CHECK(to_string(SoftLabelMode::HardCount) == "hard-count");
    CHECK(to_string(SoftLabelMode::AssocWeighted) == "assoc-weighted");
    CHECK_THROWS_AS(parse_soft_label_mode("bogus"), std::runtime_error);
}
