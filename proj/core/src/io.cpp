#include "sst/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace sst {
namespace {

void write_bytes(std::ofstream& out, const void* p, size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::filesystem::path raw_path_for(const std::filesystem::path& header_path) {
    auto p = header_path;
    p.replace_extension(".raw");
    return p;
}

// All raw floats are little-endian on disk.
static_assert(std::endian::native == std::endian::little,
              "raw cube I/O assumes a little-endian host");

std::map<std::string, std::string> parse_header(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open header: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("garbled header line '" + line + "' in " + path.string());
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

int header_int(const std::map<std::string, std::string>& kv, const std::string& key,
               const std::filesystem::path& path) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::runtime_error("header missing key '" + key + "' in " + path.string());
    try {
        return std::stoi(it->second);
    } catch (const std::exception&) {
        throw std::runtime_error("header key '" + key + "' is not an integer in " + path.string());
    }
}

void expect_header(const std::map<std::string, std::string>& kv, const std::string& key,
                   const std::string& value, const std::filesystem::path& path) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::runtime_error("header missing key '" + key + "' in " + path.string());
    if (it->second != value)
        throw std::runtime_error("header key '" + key + "' must be '" + value + "', got '" +
                                 it->second + "' in " + path.string());
}

std::vector<float> read_raw_floats(const std::filesystem::path& path, size_t count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open data file: " + path.string());
    in.seekg(0, std::ios::end);
    const auto actual = static_cast<size_t>(in.tellg());
    const size_t expected = count * sizeof(float);
    if (actual != expected)
        throw std::runtime_error("data file " + path.string() + ": expected " +
                                 std::to_string(expected) + " bytes, got " +
                                 std::to_string(actual));
    in.seekg(0);
    std::vector<float> v(count);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(expected));
    if (!in) throw std::runtime_error("short read from " + path.string());
    for (size_t i = 0; i < count; ++i)
        if (!std::isfinite(v[i]))
            throw std::runtime_error("non-finite value at index " + std::to_string(i) + " in " +
                                     path.string());
    return v;
}

void write_raw_floats(const std::filesystem::path& path, const float* p, size_t count) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write data file: " + path.string());
    write_bytes(out, p, count * sizeof(float));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void write_cube(const HsiCube& cube, const std::filesystem::path& header_path) {
    cube.validate();
    std::ofstream hdr(header_path);
    if (!hdr) throw std::runtime_error("cannot write header: " + header_path.string());
    hdr << "height = " << cube.height << "\n"
        << "width = " << cube.width << "\n"
        << "bands = " << cube.bands << "\n"
        << "dtype = float32\n"
        << "interleave = bsq\n"
        << "byteorder = le\n";
    if (!hdr) throw std::runtime_error("write failed: " + header_path.string());
    hdr.close();
    write_raw_floats(raw_path_for(header_path), cube.data.data(), cube.data.size());
}

HsiCube read_cube(const std::filesystem::path& header_path) {
    const auto kv = parse_header(header_path);
    HsiCube cube;
    cube.height = header_int(kv, "height", header_path);
    cube.width = header_int(kv, "width", header_path);
    cube.bands = header_int(kv, "bands", header_path);
    if (cube.height < 1) throw std::runtime_error("height must be >= 1");
    if (cube.width < 1) throw std::runtime_error("width must be >= 1");
    if (cube.bands < 1) throw std::runtime_error("bands must be >= 1");
    expect_header(kv, "dtype", "float32", header_path);
    expect_header(kv, "interleave", "bsq", header_path);
    expect_header(kv, "byteorder", "le", header_path);
    cube.data = read_raw_floats(raw_path_for(header_path),
                                static_cast<size_t>(cube.height) * cube.width * cube.bands);
    return cube;
}

void write_label_map(const LabelMap& map, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "P5\n" << map.width << " " << map.height << "\n65535\n";
    for (uint16_t id : map.ids) {
        const uint8_t hi = static_cast<uint8_t>(id >> 8);
        const uint8_t lo = static_cast<uint8_t>(id & 0xff);
        out.put(static_cast<char>(hi));
        out.put(static_cast<char>(lo));
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

LabelMap read_label_map(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P5") throw std::runtime_error(path.string() + ": not a binary PGM (P5)");
    if (maxval != 65535) throw std::runtime_error(path.string() + ": expected 16-bit label map");
    if (w < 1 || h < 1) throw std::runtime_error(path.string() + ": bad dimensions");
    in.get();  // single whitespace after maxval
    LabelMap map(h, w);
    std::vector<uint8_t> buf(static_cast<size_t>(w) * h * 2);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!in) throw std::runtime_error(path.string() + ": truncated pixel data");
    for (size_t i = 0; i < map.ids.size(); ++i)
        map.ids[i] = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
    return map;
}

void write_class_map_ppm(const ClassMap& map, const Palette& palette,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "P6\n" << map.width << " " << map.height << "\n255\n";
    for (uint16_t id : map.ids) {
        Rgb c{};
        if (id != kIgnoreLabel) {
            if (id >= palette.size())
                throw std::runtime_error("palette has no entry for class " + std::to_string(id));
            c = palette[id];
        }
        out.put(static_cast<char>(c.r));
        out.put(static_cast<char>(c.g));
        out.put(static_cast<char>(c.b));
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Palette read_palette(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open palette: " + path.string());
    Palette palette;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int cls = 0, r = 0, g = 0, b = 0;
        if (!(ss >> cls >> r >> g >> b))
            throw std::runtime_error("bad palette line '" + line + "' in " + path.string());
        if (cls < 0 || r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255)
            throw std::runtime_error("palette values out of range: '" + line + "'");
        if (static_cast<size_t>(cls) >= palette.size()) palette.resize(cls + 1);
        palette[cls] = Rgb{static_cast<uint8_t>(r), static_cast<uint8_t>(g),
                           static_cast<uint8_t>(b)};
    }
    return palette;
}

void write_palette(const Palette& palette, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write palette: " + path.string());
    for (size_t c = 0; c < palette.size(); ++c)
        out << c << " " << int(palette[c].r) << " " << int(palette[c].g) << " "
            << int(palette[c].b) << "\n";
}

void write_matrix(const std::vector<double>& values, int rows, int cols,
                  const std::filesystem::path& header_path) {
    if (values.size() != static_cast<size_t>(rows) * cols)
        throw std::runtime_error("matrix size mismatch");
    HsiCube cube(rows, cols, 1);
    for (size_t i = 0; i < values.size(); ++i) cube.data[i] = static_cast<float>(values[i]);
    write_cube(cube, header_path);
}

std::vector<double> read_matrix(const std::filesystem::path& header_path, int& rows, int& cols) {
    const HsiCube cube = read_cube(header_path);
    if (cube.bands != 1) throw std::runtime_error("matrix file must have bands = 1");
    rows = cube.height;
    cols = cube.width;
    return std::vector<double>(cube.data.begin(), cube.data.end());
}

uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot hash missing file: " + path.string());
    uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<uint8_t>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return h;
}

}  // namespace sst
