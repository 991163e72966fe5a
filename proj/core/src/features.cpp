#include "sst/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sst/rng.hpp"

namespace sst {

LinearMap init_linear_map(int in_dim, int out_dim, uint64_t seed) {
    if (in_dim < 1 || out_dim < 1) throw std::runtime_error("linear map dims must be >= 1");
    LinearMap map;
    map.in_dim = in_dim;
    map.out_dim = out_dim;
    map.seed = seed;
    map.bias.assign(out_dim, 0.0);
    map.weights.resize(static_cast<size_t>(out_dim) * in_dim);
    const double a = std::sqrt(6.0 / (in_dim + out_dim));
    Rng rng(seed);
    for (auto& w : map.weights) w = rng.uniform(-a, a);
    return map;
}

LinearMap identity_linear_map(int dim) {
    LinearMap map;
    map.in_dim = dim;
    map.out_dim = dim;
    map.bias.assign(dim, 0.0);
    map.weights.assign(static_cast<size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) map.weights[static_cast<size_t>(i) * dim + i] = 1.0;
    return map;
}

FeatureMap project_features(const FeatureMap& input, const LinearMap& map) {
    if (input.dim != map.in_dim)
        throw std::runtime_error("linear map expects in_dim " + std::to_string(map.in_dim) +
                                 ", input has dim " + std::to_string(input.dim));
    FeatureMap out(input.height, input.width, map.out_dim);
    const size_t n = input.count();
    for (size_t i = 0; i < n; ++i) {
        const double* x = input.row(i);
        double* y = out.row(i);
        for (int o = 0; o < map.out_dim; ++o) {
            const double* w = map.weights.data() + static_cast<size_t>(o) * map.in_dim;
            double acc = map.bias[o];
            for (int k = 0; k < map.in_dim; ++k) acc += w[k] * x[k];
            y[o] = acc;
        }
    }
    return out;
}

FeatureMap to_feature_map(const HsiCube& cube) {
    FeatureMap out(cube.height, cube.width, cube.bands);
    const size_t plane = cube.pixels();
    for (size_t i = 0; i < plane; ++i)
        for (int b = 0; b < cube.bands; ++b)
            out.row(i)[b] = cube.data[static_cast<size_t>(b) * plane + i];
    return out;
}

FeatureMap to_feature_map(const CubeD& cube) {
    FeatureMap out(cube.height, cube.width, cube.bands);
    const size_t plane = cube.pixels();
    for (size_t i = 0; i < plane; ++i)
        for (int b = 0; b < cube.bands; ++b)
            out.row(i)[b] = cube.data[static_cast<size_t>(b) * plane + i];
    return out;
}

CubeD box_average_3x3(const HsiCube& cube) {
    CubeD out(cube.height, cube.width, cube.bands);
    for (int b = 0; b < cube.bands; ++b)
        for (int y = 0; y < cube.height; ++y)
            for (int x = 0; x < cube.width; ++x) {
                double sum = 0.0;
                int count = 0;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int yy = y + dy, xx = x + dx;
                        if (yy < 0 || yy >= cube.height || xx < 0 || xx >= cube.width) continue;
                        sum += cube.at(b, yy, xx);
                        ++count;
                    }
                out.at(b, y, x) = sum / count;
            }
    return out;
}

CubeD feature_to_cube(const FeatureMap& features) {
    CubeD out(features.height, features.width, features.dim);
    const size_t plane = features.count();
    for (size_t i = 0; i < plane; ++i)
        for (int c = 0; c < features.dim; ++c)
            out.data[static_cast<size_t>(c) * plane + i] = features.row(i)[c];
    return out;
}

FeatureMap semantic_features(const HsiCube& cube, const ProviderConfig& cfg) {
    const LinearMap map = init_linear_map(cube.bands, cfg.dim, cfg.seed);
    if (cfg.name == "linear") {
        return project_features(to_feature_map(cube), map);
    }
    if (cfg.name == "local-avg") {
        return project_features(to_feature_map(box_average_3x3(cube)), map);
    }
    throw std::runtime_error("unknown feature provider '" + cfg.name + "'");
}

}  // namespace sst
