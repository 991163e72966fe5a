#include "sst/derivative.hpp"

#include <stdexcept>
#include <string>

namespace sst {

CubeD first_derivative(const CubeD& cube, int step) {
    if (step < 1 || step > cube.bands - 1)
        throw std::runtime_error("derivative step must satisfy 1 <= step <= D-1, got " +
                                 std::to_string(step) + " with D = " +
                                 std::to_string(cube.bands));
    CubeD out(cube.height, cube.width, cube.bands - step);
    const size_t plane = cube.pixels();
    const double inv = 1.0 / step;
    for (int b = 0; b < out.bands; ++b) {
        const double* lo = cube.data.data() + static_cast<size_t>(b) * plane;
        const double* hi = cube.data.data() + static_cast<size_t>(b + step) * plane;
        double* dst = out.data.data() + static_cast<size_t>(b) * plane;
        for (size_t i = 0; i < plane; ++i) dst[i] = (hi[i] - lo[i]) * inv;
    }
    return out;
}

CubeD second_derivative(const CubeD& cube, int step) {
    if (step < 1 || 2 * step > cube.bands - 1)
        throw std::runtime_error("second derivative step must satisfy 1 <= 2*step <= D-1, got " +
                                 std::to_string(step) + " with D = " +
                                 std::to_string(cube.bands));
    CubeD out(cube.height, cube.width, cube.bands - 2 * step);
    const size_t plane = cube.pixels();
    const double inv2 = 1.0 / (static_cast<double>(step) * step);
    for (int b = 0; b < out.bands; ++b) {
        const double* w0 = cube.data.data() + static_cast<size_t>(b) * plane;
        const double* w1 = cube.data.data() + static_cast<size_t>(b + step) * plane;
        const double* w2 = cube.data.data() + static_cast<size_t>(b + 2 * step) * plane;
        double* dst = out.data.data() + static_cast<size_t>(b) * plane;
        for (size_t i = 0; i < plane; ++i) dst[i] = (w2[i] - 2.0 * w1[i] + w0[i]) * inv2;
    }
    return out;
}

}  // namespace sst
