#pragma once

#include "sst/cube.hpp"

namespace sst {

// First-order spectral derivative along the band axis with step `step`:
// out band i = (in band i+step - in band i) / step, i in [0, D-step).
CubeD first_derivative(const CubeD& cube, int step);

// Second-order derivative: out band i =
// (in band i+2*step - 2*in band i+step + in band i) / step^2.
CubeD second_derivative(const CubeD& cube, int step);

inline CubeD first_derivative(const HsiCube& cube, int step) {
    return first_derivative(to_double_cube(cube), step);
}
inline CubeD second_derivative(const HsiCube& cube, int step) {
    return second_derivative(to_double_cube(cube), step);
}

}  // namespace sst
