#include "sst/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sst/rng.hpp"

namespace sst {

SceneSpec quadrant_scene(int height, int width, int bands, double noise_sigma, uint64_t seed,
                         double min_separation) {
    SceneSpec spec;
    spec.height = height;
    spec.width = width;
    spec.bands = bands;
    spec.num_classes = 4;
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;

    // Each class gets an exclusive block of bands raised by `amp` above a
    // flat baseline; two class means then differ on 2*block bands.
    const int block = std::max(1, bands / 4);
    const double amp = 1.1 * min_separation / std::sqrt(2.0 * block);
    spec.class_spectra.assign(4, std::vector<float>(bands, 0.2f));
    for (int c = 0; c < 4; ++c) {
        const int lo = c * block;
        const int hi = (c == 3) ? bands : (c + 1) * block;
        for (int b = lo; b < hi && b < bands; ++b)
            spec.class_spectra[c][b] = static_cast<float>(0.2 + amp);
    }

    const int hm = height / 2;
    const int wm = width / 2;
    spec.regions = {
        {0, 0, hm, wm, 0},
        {0, wm, hm, width, 1},
        {hm, 0, height, wm, 2},
        {hm, wm, height, width, 3},
    };
    return spec;
}

std::pair<HsiCube, LabelMap> make_synthetic_scene(const SceneSpec& spec) {
    if (spec.height < 1 || spec.width < 1 || spec.bands < 1)
        throw std::runtime_error("scene dimensions must be >= 1");
    if (spec.num_classes < 1) throw std::runtime_error("num_classes must be >= 1");
    if (spec.noise_sigma < 0.0) throw std::runtime_error("noise_sigma must be >= 0");
    if (spec.class_spectra.size() != static_cast<size_t>(spec.num_classes))
        throw std::runtime_error("need one class spectrum per class");
    for (const auto& s : spec.class_spectra)
        if (s.size() != static_cast<size_t>(spec.bands))
            throw std::runtime_error("class spectrum length must equal band count");

    LabelMap labels(spec.height, spec.width, kIgnoreLabel);
    for (const auto& r : spec.regions) {
        if (r.row0 < 0 || r.col0 < 0 || r.row1 > spec.height || r.col1 > spec.width ||
            r.row0 >= r.row1 || r.col0 >= r.col1)
            throw std::runtime_error("region out of bounds or empty");
        if (r.class_id >= spec.num_classes)
            throw std::runtime_error("region class id out of range");
        for (int y = r.row0; y < r.row1; ++y)
            for (int x = r.col0; x < r.col1; ++x) labels.at(y, x) = r.class_id;
    }
    for (size_t i = 0; i < labels.ids.size(); ++i)
        if (labels.ids[i] == kIgnoreLabel)
            throw std::runtime_error("region layout does not cover pixel " + std::to_string(i));

    HsiCube cube(spec.height, spec.width, spec.bands);
    Rng rng(spec.seed);
    // Band-major fill matches the cube's band-sequential storage order.
    for (int b = 0; b < spec.bands; ++b)
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x) {
                const double mean = spec.class_spectra[labels.at(y, x)][b];
                const double noise =
                    spec.noise_sigma > 0.0 ? spec.noise_sigma * rng.gaussian() : 0.0;
                cube.at(b, y, x) = static_cast<float>(mean + noise);
            }
    return {std::move(cube), std::move(labels)};
}

}  // namespace sst
