/// @file io.hpp
/// @brief Binary field files ("UGF1") and P5 PGM mask images.
///
/// UGF1 layout: 4-byte magic "UGF1", uint32 little-endian side length n,
/// then n*n little-endian IEEE-754 doubles, row-major. Round trips are
/// bit-exact for every finite double.

#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ugrid/core.hpp"

namespace ugrid {

namespace detail {

inline void put_u32_le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32_le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("field file truncated in header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void put_f64_le(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>((u >> (8 * k)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline double get_f64_le(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("field file truncated in payload");
    std::uint64_t u = 0;
    for (int k = 0; k < 8; ++k) u |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

}  // namespace detail

inline void write_field(const std::string& path, const GridField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write("UGF1", 4);
    detail::put_u32_le(os, static_cast<std::uint32_t>(f.n()));
    for (double v : f.data()) detail::put_f64_le(os, v);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline GridField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "UGF1", 4) != 0) {
        throw std::runtime_error("bad magic in field file: " + path);
    }
    const std::uint32_t n = detail::get_u32_le(is);
    if (!is_valid_grid_size(static_cast<int>(n))) {
        throw std::runtime_error("field file " + path + ": invalid grid size " + std::to_string(n));
    }
    GridField f(static_cast<int>(n));
    for (double& v : f.data()) v = detail::get_f64_le(is);
    return f;
}

/// Masks travel either as UGF1 files of exact 0/1 values or as binary PGM
/// images (nonzero pixel -> interior). The frame is always forced to boundary.
inline void write_mask(const std::string& path, const InteriorMask& m) {
    GridField f(m.n());
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j) f(i, j) = m.interior(i, j) ? 1.0 : 0.0;
    write_field(path, f);
}

inline InteriorMask read_mask_ugf(const std::string& path) {
    GridField f = read_field(path);
    std::vector<std::uint8_t> d(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double v = f.data()[k];
        if (v != 0.0 && v != 1.0) {
            throw std::runtime_error("mask file " + path + ": entries must be exactly 0 or 1");
        }
        d[k] = v == 1.0 ? 1 : 0;
    }
    return InteriorMask(f.n(), std::move(d));
}

inline void write_mask_pgm(const std::string& path, const InteriorMask& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "P5\n" << m.n() << " " << m.n() << "\n255\n";
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j) os.put(m.interior(i, j) ? char(255) : char(0));
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline InteriorMask read_mask_pgm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::string magic;
    is >> magic;
    if (magic != "P5") throw std::runtime_error("not a binary (P5) PGM: " + path);
    auto next_int = [&is, &path]() {
        // PGM allows '#' comment lines between header tokens.
        for (;;) {
            int c = is.peek();
            if (c == '#') {
                std::string line;
                std::getline(is, line);
            } else if (std::isspace(c)) {
                is.get();
            } else {
                break;
            }
        }
        long v = -1;
        is >> v;
        if (!is || v < 0) throw std::runtime_error("malformed PGM header: " + path);
        return v;
    };
    const long w = next_int();
    const long h = next_int();
    const long maxval = next_int();
    is.get();  // single whitespace after maxval
    if (w != h) throw std::runtime_error("PGM mask must be square: " + path);
    if (maxval <= 0 || maxval > 255) throw std::runtime_error("PGM maxval out of range: " + path);
    if (!is_valid_grid_size(static_cast<int>(w))) {
        throw std::runtime_error("PGM mask " + path + ": invalid grid size " + std::to_string(w));
    }
    const int n = static_cast<int>(w);
    std::vector<std::uint8_t> d(static_cast<std::size_t>(n) * n);
    std::vector<char> raw(d.size());
    is.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!is) throw std::runtime_error("PGM file truncated: " + path);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = raw[k] != 0 ? 1 : 0;
    return InteriorMask(n, std::move(d));  // constructor forces the frame to boundary
}

/// Dispatch on extension: .pgm -> PGM, anything else -> UGF1.
inline InteriorMask read_mask(const std::string& path) {
    const auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".pgm" || ext == ".PGM") return read_mask_pgm(path);
    return read_mask_ugf(path);
}

}  // namespace ugrid
