#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sst/cube.hpp"

namespace sst {

// Fixed (seeded, never trained) affine map used to standardize feature
// dimensions before clustering.
struct LinearMap {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<double> weights;  // out_dim x in_dim, row-major
    std::vector<double> bias;     // out_dim
    uint64_t seed = 0;
};

// Weights ~ Uniform(-a, a) with a = sqrt(6 / (in_dim + out_dim)), bias zero.
LinearMap init_linear_map(int in_dim, int out_dim, uint64_t seed);

LinearMap identity_linear_map(int dim);

// row_i(out) = W * row_i(in) + b for every pixel row.
FeatureMap project_features(const FeatureMap& input, const LinearMap& map);

// Flatten a cube into per-pixel spectra rows (N x D, pixel order row-major).
FeatureMap to_feature_map(const HsiCube& cube);
FeatureMap to_feature_map(const CubeD& cube);

struct ProviderConfig {
    std::string name = "linear";  // "linear" or "local-avg"
    int dim = 32;
    uint64_t seed = 0;
};

// Lightweight semantic feature providers. Both preserve spatial resolution.
//   linear    : per-pixel LinearMap applied to the raw spectrum
//   local-avg : 3x3 spatial box average per band (edge-clamped), then the
//               same per-pixel LinearMap
FeatureMap semantic_features(const HsiCube& cube, const ProviderConfig& cfg);

// 3x3 edge-clamped box average per band; exposed for testing.
CubeD box_average_3x3(const HsiCube& cube);

// Inverse of to_feature_map: feature channels become bands, so feature maps
// can round-trip through the cube file format.
CubeD feature_to_cube(const FeatureMap& features);

}  // namespace sst
