#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sst/io.hpp"
#include "sst/rng.hpp"
#include "sst/synthetic.hpp"

using namespace sst;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "sst_test_io";
    fs::create_directories(dir);
    return dir;
}

HsiCube random_cube(int h, int w, int d, uint64_t seed) {
    HsiCube cube(h, w, d);
    Rng rng(seed);
    for (auto& v : cube.data) v = static_cast<float>(rng.uniform(-2.0, 2.0));
    return cube;
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cube write/read roundtrip is bitwise") {
    const auto dir = temp_dir();
    const HsiCube cube = random_cube(5, 7, 3, 42);
    write_cube(cube, dir / "rt.hdr");
    const HsiCube back = read_cube(dir / "rt.hdr");
    CHECK(back.height == 5);
    CHECK(back.width == 7);
    CHECK(back.bands == 3);
    CHECK(back.data == cube.data);
}

TEST_CASE("cube files are byte-identical across writes") {
    const auto dir = temp_dir();
    const HsiCube cube = random_cube(4, 4, 2, 7);
    write_cube(cube, dir / "a.hdr");
    write_cube(cube, dir / "b.hdr");
    CHECK(file_bytes(dir / "a.hdr") == file_bytes(dir / "b.hdr"));
    CHECK(file_bytes(dir / "a.raw") == file_bytes(dir / "b.raw"));
}

TEST_CASE("2x2x3 cube data file is exactly 48 bytes, header declares bsq") {
    const auto dir = temp_dir();
    write_cube(HsiCube(2, 2, 3), dir / "small.hdr");
    CHECK(fs::file_size(dir / "small.raw") == 48);
    const std::string hdr = file_bytes(dir / "small.hdr");
    CHECK(hdr.find("interleave = bsq") != std::string::npos);
    CHECK(hdr.find("byteorder = le") != std::string::npos);
}

TEST_CASE("bands = 0 header is rejected") {
    const auto dir = temp_dir();
    write_cube(HsiCube(2, 2, 1), dir / "bad.hdr");
    std::ofstream(dir / "bad.hdr") << "height = 2\nwidth = 2\nbands = 0\n"
                                   << "dtype = float32\ninterleave = bsq\nbyteorder = le\n";
    CHECK_THROWS_WITH_AS(read_cube(dir / "bad.hdr"), "bands must be >= 1", std::runtime_error);
}

TEST_CASE("short data file reports expected vs actual byte counts") {
    const auto dir = temp_dir();
    write_cube(HsiCube(2, 2, 3), dir / "short.hdr");
    fs::resize_file(dir / "short.raw", 44);
    try {
        read_cube(dir / "short.hdr");
        FAIL("expected a size mismatch error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("48") != std::string::npos);
        CHECK(msg.find("44") != std::string::npos);
    }
}

TEST_CASE("non-finite values are rejected with the offending index") {
    const auto dir = temp_dir();
    HsiCube cube(1, 3, 1);
    cube.data = {1.0f, std::numeric_limits<float>::infinity(), 3.0f};
    // bypass write-side validation by writing raw bytes directly
    std::ofstream(dir / "nan.hdr") << "height = 1\nwidth = 3\nbands = 1\n"
                                   << "dtype = float32\ninterleave = bsq\nbyteorder = le\n";
    std::ofstream raw(dir / "nan.raw", std::ios::binary);
    raw.write(reinterpret_cast<const char*>(cube.data.data()), 12);
    raw.close();
    try {
        read_cube(dir / "nan.hdr");
        FAIL("expected rejection");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
}

TEST_CASE("label map PGM roundtrip including the ignore id") {
    const auto dir = temp_dir();
    LabelMap map(1, 3);
    map.ids = {0, 1, kIgnoreLabel};
    write_label_map(map, dir / "labels.pgm");
    const LabelMap back = read_label_map(dir / "labels.pgm");
    CHECK(back.ids == map.ids);
}

TEST_CASE("8-bit PGM is rejected") {
    const auto dir = temp_dir();
    std::ofstream out(dir / "8bit.pgm", std::ios::binary);
    out << "P5\n2 1\n255\n";
    out.put(0);
    out.put(1);
    out.close();
    try {
        read_label_map(dir / "8bit.pgm");
        FAIL("expected rejection");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("expected 16-bit label map") != std::string::npos);
    }
}

TEST_CASE("palette colorization picks the class color") {
    const auto dir = temp_dir();
    ClassMap map(1, 1);
    map.ids = {2};
    const Palette palette = {{10, 0, 0}, {0, 10, 0}, {0, 255, 0}};
    write_class_map_ppm(map, palette, dir / "c.ppm");
    const std::string bytes = file_bytes(dir / "c.ppm");
    // header "P6\n1 1\n255\n" then one RGB triple
    CHECK(bytes.substr(bytes.size() - 3) == std::string("\x00\xff\x00", 3));
}

TEST_CASE("palette file roundtrip") {
    const auto dir = temp_dir();
    const Palette palette = {{1, 2, 3}, {4, 5, 6}};
    write_palette(palette, dir / "pal.txt");
    const Palette back = read_palette(dir / "pal.txt");
    REQUIRE(back.size() == 2);
    CHECK(back[1].g == 5);
}

TEST_CASE("synthetic scene: zero noise reproduces class means exactly") {
    SceneSpec spec = quadrant_scene(8, 8, 4, 0.0, 123);
    auto [cube, labels] = make_synthetic_scene(spec);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            for (int b = 0; b < 4; ++b)
                CHECK(cube.at(b, y, x) == spec.class_spectra[labels.at(y, x)][b]);
}

TEST_CASE("synthetic scene is a pure function of the spec") {
    const SceneSpec spec = quadrant_scene(16, 16, 8, 0.1, 99);
    auto [c1, l1] = make_synthetic_scene(spec);
    auto [c2, l2] = make_synthetic_scene(spec);
    CHECK(c1.data == c2.data);
    CHECK(l1.ids == l2.ids);
}

TEST_CASE("64x64 quadrant scene has 1024 pixels per class") {
    auto [cube, labels] = make_synthetic_scene(quadrant_scene(64, 64, 4, 0.0, 1));
    size_t counts[4] = {0, 0, 0, 0};
    for (uint16_t id : labels.ids) ++counts[id];
    for (size_t c : counts) CHECK(c == 1024);
}

TEST_CASE("uncovered region layout is rejected") {
    SceneSpec spec = quadrant_scene(8, 8, 4, 0.0, 1);
    spec.regions.pop_back();
    CHECK_THROWS_AS(make_synthetic_scene(spec), std::runtime_error);
}
