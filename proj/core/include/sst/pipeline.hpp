#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sst/classifier.hpp"
#include "sst/cluster.hpp"
#include "sst/config.hpp"
#include "sst/eval.hpp"
#include "sst/features.hpp"
#include "sst/soft_label.hpp"

namespace sst {

struct PipelineConfig {
    std::filesystem::path cube_path;
    std::filesystem::path labels_path;
    std::filesystem::path palette_path;  // optional
    std::filesystem::path output_dir;

    ProviderConfig provider;     // semantic stand-in, dim C1
    int derivative_step = 1;
    bool use_derivative = true;

    ClusterConfig cluster;
    SoftLabelMode label_mode = SoftLabelMode::HardCount;
    bool hard_label_ablation = false;  // train on one-hot labels instead

    int feature_dim = 32;  // C2: clustering / classifier width
    int heads = 4;
    int blocks = 2;
    int num_classes = 0;

    TrainConfig train;
    uint64_t seed = 0;

    static PipelineConfig from_config(const KeyValueConfig& kv);
    void validate_paths() const;
};

struct ManifestEntry {
    std::string name;
    std::string path;
    uint64_t hash = 0;
};

struct PipelineOutput {
    std::vector<ManifestEntry> manifest;
    MetricsReport report;
    std::filesystem::path manifest_path;
};

// derive -> features -> cluster -> aggregate -> soft-labels -> train ->
// predict -> eval. Every artifact is written under output_dir and listed in
// the manifest with its content hash.
PipelineOutput run_pipeline(const PipelineConfig& config);

struct StageTiming {
    std::string stage;
    double millis = 0.0;       // median over repeats
    uint64_t arithmetic_ops = 0;  // analytic count, pure function of config
};

struct BenchReport {
    std::vector<StageTiming> stages;
    double total_millis = 0.0;
    double pixels_per_second = 0.0;
};

BenchReport bench(const PipelineConfig& config, int repeats);

void write_metrics_csv(const MetricsReport& report, const std::filesystem::path& path);
void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path);
void write_soft_labels_csv(const SoftLabelMatrix& labels, const std::filesystem::path& path);
SoftLabelMatrix read_soft_labels_csv(const std::filesystem::path& path);
void write_epoch_log_csv(const std::vector<EpochLog>& log, const std::filesystem::path& path);
void write_assignment_pgm(const AssignmentMap& assignment, const std::filesystem::path& path);

}  // namespace sst
