#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rotdev/config.hpp"

namespace rotdev {

enum class GridDtype : std::uint32_t { f64 = 1, f32 = 2, u8 = 3 };

/// A raster stored as raw little-endian values behind a 64-byte header:
///   0  magic "RDGRID01"      8 bytes
///   8  version               u32 (1)
///  12  dtype                 u32
///  16  width, height         u32, u32
///  24  payload bytes         u64
///  32  FNV-1a of payload     u64
///  40  key                   u64
///  48  zero padding          16 bytes
struct GridBlob {
    GridDtype dtype = GridDtype::f64;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> payload;

    static GridBlob from_f64(const std::vector<double>& v, std::uint32_t width, std::uint32_t height);
    static GridBlob from_u8(const std::vector<std::uint8_t>& v, std::uint32_t width, std::uint32_t height);
    std::vector<double> as_f64() const;
    std::vector<std::uint8_t> as_u8() const;
};

inline constexpr std::size_t kGridHeaderSize = 64;

std::vector<std::uint8_t> encode_grid(const GridBlob& blob, std::uint64_t key);
/// Throws Error on a bad magic, version, size or checksum.
GridBlob decode_grid(const std::vector<std::uint8_t>& bytes, std::uint64_t expected_key);

/// Content-addressed store under a directory; entries are named by the hex key.
class GridCache {
public:
    GridCache(std::filesystem::path dir, CachePolicy policy) : dir_(std::move(dir)), policy_(policy) {}

    static std::uint64_t key(std::uint64_t map_hash, const std::string& stage, const std::string& params);

    std::optional<GridBlob> load(std::uint64_t key);
    void store(std::uint64_t key, const GridBlob& blob);

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }
    CachePolicy policy() const { return policy_; }

private:
    std::filesystem::path path_for(std::uint64_t key) const;

    std::filesystem::path dir_;
    CachePolicy policy_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

} // namespace rotdev
