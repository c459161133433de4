/// @file net_io.hpp
/// @brief Checkpoint persistence for UGridParams (see net.hpp for the layout).

#pragma once

#include <fstream>

#include <json.hpp>

#include "ugrid/io.hpp"
#include "ugrid/net.hpp"

namespace ugrid {

namespace detail {

/// Tensor descriptors in payload order; shapes are (c_out, c_in, 3, 3).
inline nlohmann::json checkpoint_tensor_list(const UGridParams& p) {
    nlohmann::json tensors = nlohmann::json::array();
    tensors.push_back({{"name", "lift"}, {"c_out", p.channels}, {"c_in", 1}});
    for (int l = 0; l < p.depth; ++l) {
        for (int k = 0; k < p.pre_convs; ++k) {
            tensors.push_back({{"name", "level" + std::to_string(l) + ".pre" + std::to_string(k)},
                               {"c_out", p.channels},
                               {"c_in", p.channels}});
        }
        for (int k = 0; k < p.post_convs; ++k) {
            tensors.push_back({{"name", "level" + std::to_string(l) + ".post" + std::to_string(k)},
                               {"c_out", p.channels},
                               {"c_in", p.channels}});
        }
    }
    tensors.push_back({{"name", "project"}, {"c_out", 1}, {"c_in", p.channels}});
    return tensors;
}

}  // namespace detail

inline void save_checkpoint(const std::string& path, const UGridParams& p) {
    nlohmann::json header;
    header["version"] = kCheckpointVersion;
    header["depth"] = p.depth;
    header["channels"] = p.channels;
    header["pre_convs"] = p.pre_convs;
    header["post_convs"] = p.post_convs;
    header["seed"] = p.seed;
    header["tensors"] = detail::checkpoint_tensor_list(p);
    const std::string hs = header.dump();

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write("UGCP", 4);
    detail::put_u32_le(os, kCheckpointVersion);
    detail::put_u32_le(os, static_cast<std::uint32_t>(hs.size()));
    os.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    for (double v : p.w) detail::put_f64_le(os, v);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline UGridParams load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "UGCP", 4) != 0) throw std::runtime_error("bad magic in checkpoint: " + path);
    const std::uint32_t version = detail::get_u32_le(is);
    if (version != kCheckpointVersion) {
        throw std::runtime_error("checkpoint " + path + ": schema version " + std::to_string(version) +
                                 " not supported (expected " + std::to_string(kCheckpointVersion) + ")");
    }
    const std::uint32_t hlen = detail::get_u32_le(is);
    std::string hs(hlen, '\0');
    is.read(hs.data(), hlen);
    if (!is) throw std::runtime_error("checkpoint truncated in header: " + path);
    nlohmann::json header = nlohmann::json::parse(hs, nullptr, false);
    if (header.is_discarded()) throw std::runtime_error("checkpoint header is not valid JSON: " + path);

    UGridParams p;
    p.depth = header.at("depth").get<int>();
    p.channels = header.at("channels").get<int>();
    p.pre_convs = header.at("pre_convs").get<int>();
    p.post_convs = header.at("post_convs").get<int>();
    p.seed = header.at("seed").get<std::uint64_t>();
    if (p.depth < 1 || p.channels < 1) throw std::runtime_error("checkpoint header has bad architecture: " + path);
    const nlohmann::json expected = detail::checkpoint_tensor_list(p);
    if (header.at("tensors") != expected) {
        throw std::runtime_error("checkpoint tensor list does not match its architecture header: " + path);
    }
    p.w.resize(p.parameter_count());
    for (double& v : p.w) v = detail::get_f64_le(is);
    is.peek();
    if (!is.eof()) throw std::runtime_error("checkpoint has trailing bytes: " + path);
    for (double v : p.w) {
        if (!std::isfinite(v)) throw std::runtime_error("checkpoint payload contains non-finite weights: " + path);
    }
    return p;
}

/// Loads and insists on a specific architecture; mismatches report the first
/// offending tensor by name.
inline UGridParams load_checkpoint(const std::string& path, int expect_depth, int expect_channels) {
    UGridParams p = load_checkpoint(path);
    if (p.depth != expect_depth || p.channels != expect_channels) {
        std::string where = p.depth != expect_depth
                                ? "level" + std::to_string(std::min(p.depth, expect_depth)) + ".pre0"
                                : "lift";
        throw std::runtime_error("checkpoint " + path + ": expected depth " + std::to_string(expect_depth) +
                                 ", channels " + std::to_string(expect_channels) + ", got depth " +
                                 std::to_string(p.depth) + ", channels " + std::to_string(p.channels) +
                                 " (first mismatching tensor: " + where + ")");
    }
    return p;
}

}  // namespace ugrid
