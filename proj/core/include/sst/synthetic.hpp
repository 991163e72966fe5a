#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sst/cube.hpp"

namespace sst {

// Axis-aligned rectangle of one class inside a synthetic scene,
// rows [row0, row1) x cols [col0, col1).
struct Region {
    int row0 = 0, col0 = 0, row1 = 0, col1 = 0;
    uint16_t class_id = 0;
};

struct SceneSpec {
    int height = 0;
    int width = 0;
    int bands = 0;
    int num_classes = 0;
    std::vector<std::vector<float>> class_spectra;  // one mean spectrum per class
    double noise_sigma = 0.0;
    std::vector<Region> regions;  // must tile the full image
    uint64_t seed = 0;
};

// Quadrant layout helper: 4 classes, spectra spaced so that any two class
// means are at L2 distance >= min_separation.
SceneSpec quadrant_scene(int height, int width, int bands, double noise_sigma, uint64_t seed,
                         double min_separation = 1.0);

// Deterministic per seed. Pixel spectrum = class mean + N(0, sigma^2) per
// band, gaussians drawn in band-major order (whole band 0 first).
std::pair<HsiCube, LabelMap> make_synthetic_scene(const SceneSpec& spec);

}  // namespace sst
