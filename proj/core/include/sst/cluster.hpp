#pragma once

#include <cstdint>
#include <vector>

#include "sst/cube.hpp"

namespace sst {

struct ClusterConfig {
    int grid = 16;       // F: grid cells per image side
    int per_cell = 4;    // M: centroids per cell
    int iterations = 4;  // T: association/update rounds
    int knn = 9;         // k nearest pixels averaged for centroid init
    int window = 1;      // R: Chebyshev radius, in grid cells, of the
                         // center neighborhood each pixel associates with
    int threads = 1;

    int total_centers() const { return grid * grid * per_cell; }
    void validate() const;
};

// Centroid j lives in grid cell j / per_cell; cells are numbered row-major.
struct CentroidSet {
    int count = 0;
    int dim = 0;
    std::vector<double> features;   // count x dim
    std::vector<int> anchor_row;    // pixel coordinates of the initial sample
    std::vector<int> anchor_col;

    double* feature(int j) { return features.data() + static_cast<size_t>(j) * dim; }
    const double* feature(int j) const { return features.data() + static_cast<size_t>(j) * dim; }
};

// Sparse pixel-by-center Gaussian similarities exp(-d^2), restricted to each
// pixel's window. CSR over pixels: row i holds entries
// [row_offsets[i], row_offsets[i+1]).
struct AssociationMatrix {
    size_t pixels = 0;
    int centers = 0;
    std::vector<size_t> row_offsets;  // pixels + 1
    std::vector<int> center_index;
    std::vector<double> weight;

    double at_dense(size_t pixel, int center) const;  // 0 when outside the window
};

struct AssignmentMap {
    int height = 0;
    int width = 0;
    std::vector<int> center;  // argmax-association center per pixel

    size_t count() const { return static_cast<size_t>(height) * width; }
};

struct SupertokenSet {
    int count = 0;
    int dim = 0;
    std::vector<double> features;      // count x dim
    std::vector<size_t> member_count;  // hard-assigned pixels per token

    double* feature(int j) { return features.data() + static_cast<size_t>(j) * dim; }
    const double* feature(int j) const { return features.data() + static_cast<size_t>(j) * dim; }
};

struct ClusterResult {
    AssociationMatrix associations;
    CentroidSet centers;
    AssignmentMap assignment;
};

// Balanced grid partition: pixel row y falls in cell floor(y*F / H). Every
// cell is non-empty whenever H >= F and W >= F.
int cell_of(int coord, int extent, int grid);
int cell_span_begin(int cell, int extent, int grid);
int cell_span_end(int cell, int extent, int grid);

// Deterministic stratified initialization: each cell contributes per_cell
// anchors on a ceil(sqrt(M)) sub-lattice (exact lattice for M in
// {1,4,9,16}); the centroid feature is the mean of `features` over the
// anchor's knn nearest pixels by Euclidean pixel distance, ties broken by
// row-major pixel index.
CentroidSet init_centroids(const FeatureMap& features, const ClusterConfig& cfg);

// A(ij) = exp(-||query(i) - P(j)||^2) for centers j whose home cell is
// within Chebyshev distance cfg.window of pixel i's cell. `query` is the
// per-pixel sum of the clustering inputs.
AssociationMatrix compute_associations(const FeatureMap& query, const CentroidSet& centers,
                                       const ClusterConfig& cfg);

// Convenience wrapper summing the three standard inputs.
FeatureMap sum_feature_maps(const std::vector<const FeatureMap*>& maps);
AssociationMatrix compute_associations(const FeatureMap& semantic, const FeatureMap& spectral,
                                       const FeatureMap& derivative, const CentroidSet& centers,
                                       const ClusterConfig& cfg);

// P(j) = sum_i Ahat(ij) * features(i) with Ahat the column-normalized
// association matrix; centers with an all-zero column keep their previous
// feature.
CentroidSet update_centers(const AssociationMatrix& assoc, const FeatureMap& features,
                           const CentroidSet& previous, int threads = 1);

// Hard assignment: argmax association per pixel, ties to the smaller center
// index.
AssignmentMap assign_pixels(const AssociationMatrix& assoc, int height, int width);

// Full stage-1 iteration: init, T rounds of associate+update, one final
// association pass, then hard assignment.
ClusterResult cluster(const FeatureMap& semantic, const FeatureMap& query,
                      const ClusterConfig& cfg);

// s_j = (p_j + sum_i a_i f_i) / (1 + sum_i a_i) over token j's hard-assigned
// pixels i with weights a_i = A(i,j); tokens with no pixels get s_j = p_j.
SupertokenSet aggregate_tokens(const AssociationMatrix& assoc, const AssignmentMap& assignment,
                               const FeatureMap& features, const CentroidSet& centers);

}  // namespace sst
