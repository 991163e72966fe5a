#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sst {

// Label id marking unlabeled ground-truth pixels. Excluded from soft labels
// and from every evaluation metric.
inline constexpr uint16_t kIgnoreLabel = 65535;

// Radiance cube, band-sequential storage (all of band 0, then band 1, ...),
// row-major within each band.
struct HsiCube {
    int height = 0;
    int width = 0;
    int bands = 0;
    std::vector<float> data;

    HsiCube() = default;
    HsiCube(int h, int w, int d)
        : height(h), width(w), bands(d), data(static_cast<size_t>(h) * w * d, 0.0f) {}

    size_t pixels() const { return static_cast<size_t>(height) * width; }

    float at(int band, int row, int col) const {
        return data[(static_cast<size_t>(band) * height + row) * width + col];
    }
    float& at(int band, int row, int col) {
        return data[(static_cast<size_t>(band) * height + row) * width + col];
    }

    void validate() const {
        if (height < 1 || width < 1 || bands < 1)
            throw std::runtime_error("cube dimensions must be >= 1");
        if (data.size() != static_cast<size_t>(height) * width * bands)
            throw std::runtime_error("cube data length does not match H*W*D");
    }
};

// Per-pixel integer class ids; ground truth may contain kIgnoreLabel.
struct LabelMap {
    int height = 0;
    int width = 0;
    std::vector<uint16_t> ids;

    LabelMap() = default;
    LabelMap(int h, int w, uint16_t fill = 0)
        : height(h), width(w), ids(static_cast<size_t>(h) * w, fill) {}

    uint16_t at(int row, int col) const { return ids[static_cast<size_t>(row) * width + col]; }
    uint16_t& at(int row, int col) { return ids[static_cast<size_t>(row) * width + col]; }
};

// Predicted class per pixel. Same layout as LabelMap; kept as a distinct
// alias for readability of interfaces.
using ClassMap = LabelMap;

// Per-pixel feature rows, N x C with N = H*W, pixel order row-major.
struct FeatureMap {
    int height = 0;
    int width = 0;
    int dim = 0;
    std::vector<double> rows;

    FeatureMap() = default;
    FeatureMap(int h, int w, int c)
        : height(h), width(w), dim(c), rows(static_cast<size_t>(h) * w * c, 0.0) {}

    size_t count() const { return static_cast<size_t>(height) * width; }
    double* row(size_t i) { return rows.data() + i * dim; }
    const double* row(size_t i) const { return rows.data() + i * dim; }
};

// Double-precision cube used for derivative features and other intermediate
// band stacks where float32 rounding would dominate test tolerances.
struct CubeD {
    int height = 0;
    int width = 0;
    int bands = 0;
    std::vector<double> data;

    CubeD() = default;
    CubeD(int h, int w, int d)
        : height(h), width(w), bands(d), data(static_cast<size_t>(h) * w * d, 0.0) {}

    size_t pixels() const { return static_cast<size_t>(height) * width; }

    double at(int band, int row, int col) const {
        return data[(static_cast<size_t>(band) * height + row) * width + col];
    }
    double& at(int band, int row, int col) {
        return data[(static_cast<size_t>(band) * height + row) * width + col];
    }
};

inline CubeD to_double_cube(const HsiCube& cube) {
    CubeD out(cube.height, cube.width, cube.bands);
    for (size_t i = 0; i < cube.data.size(); ++i) out.data[i] = cube.data[i];
    return out;
}

inline HsiCube to_float_cube(const CubeD& cube) {
    HsiCube out(cube.height, cube.width, cube.bands);
    for (size_t i = 0; i < cube.data.size(); ++i) out.data[i] = static_cast<float>(cube.data[i]);
    return out;
}

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;
};

using Palette = std::vector<Rgb>;

}  // namespace sst
