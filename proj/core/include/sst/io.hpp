#pragma once

#include <filesystem>
#include <string>

#include "sst/cube.hpp"

namespace sst {

// Cube file format: plain-text header ("key = value" lines: height, width,
// bands, dtype = float32, interleave = bsq, byteorder = le) plus a raw
// binary sidecar with the same basename and a .raw extension, holding
// H*W*D little-endian 32-bit floats in band-sequential order.
void write_cube(const HsiCube& cube, const std::filesystem::path& header_path);
HsiCube read_cube(const std::filesystem::path& header_path);

// Label / class maps are 16-bit binary PGM (P5, maxval 65535, big-endian
// samples per the netpbm spec).
void write_label_map(const LabelMap& map, const std::filesystem::path& path);
LabelMap read_label_map(const std::filesystem::path& path);

// Colorized map as binary PPM (P6). The palette must have one RGB triple
// per class id that occurs; kIgnoreLabel renders black.
void write_class_map_ppm(const ClassMap& map, const Palette& palette,
                         const std::filesystem::path& path);

// Palette file: text lines "class r g b".
Palette read_palette(const std::filesystem::path& path);
void write_palette(const Palette& palette, const std::filesystem::path& path);

// Token features and similar N x C matrices reuse the cube format with
// height = N, width = C, bands = 1.
void write_matrix(const std::vector<double>& values, int rows, int cols,
                  const std::filesystem::path& header_path);
std::vector<double> read_matrix(const std::filesystem::path& header_path, int& rows, int& cols);

// FNV-1a 64-bit over a file's bytes, used by pipeline manifests.
uint64_t hash_file(const std::filesystem::path& path);

}  // namespace sst
