#include "rotdev/grid_cache.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "rotdev/errors.hpp"

namespace rotdev {

namespace {

constexpr char kMagic[8] = {'R', 'D', 'G', 'R', 'I', 'D', '0', '1'};
constexpr std::uint32_t kVersion = 1;

// The on-disk format is little-endian; so are all supported hosts.
template <class T>
void put(std::vector<std::uint8_t>& out, std::size_t at, T v) {
    std::memcpy(out.data() + at, &v, sizeof v);
}

template <class T>
T get(const std::vector<std::uint8_t>& in, std::size_t at) {
    T v;
    std::memcpy(&v, in.data() + at, sizeof v);
    return v;
}

std::size_t element_size(GridDtype d) {
    switch (d) {
    case GridDtype::f64: return 8;
    case GridDtype::f32: return 4;
    case GridDtype::u8: return 1;
    }
    return 0;
}

} // namespace

GridBlob GridBlob::from_f64(const std::vector<double>& v, std::uint32_t width, std::uint32_t height) {
    GridBlob b;
    b.dtype = GridDtype::f64;
    b.width = width;
    b.height = height;
    b.payload.resize(v.size() * sizeof(double));
    std::memcpy(b.payload.data(), v.data(), b.payload.size());
    return b;
}

GridBlob GridBlob::from_u8(const std::vector<std::uint8_t>& v, std::uint32_t width, std::uint32_t height) {
    GridBlob b;
    b.dtype = GridDtype::u8;
    b.width = width;
    b.height = height;
    b.payload = v;
    return b;
}

std::vector<double> GridBlob::as_f64() const {
    if (dtype != GridDtype::f64) throw Error("cached grid is not f64");
    std::vector<double> out(payload.size() / sizeof(double));
    std::memcpy(out.data(), payload.data(), out.size() * sizeof(double));
    return out;
}

std::vector<std::uint8_t> GridBlob::as_u8() const {
    if (dtype != GridDtype::u8) throw Error("cached grid is not u8");
    return payload;
}

std::vector<std::uint8_t> encode_grid(const GridBlob& blob, std::uint64_t key) {
    std::vector<std::uint8_t> out(kGridHeaderSize + blob.payload.size(), 0);
    std::memcpy(out.data(), kMagic, 8);
    put<std::uint32_t>(out, 8, kVersion);
    put<std::uint32_t>(out, 12, static_cast<std::uint32_t>(blob.dtype));
    put<std::uint32_t>(out, 16, blob.width);
    put<std::uint32_t>(out, 20, blob.height);
    put<std::uint64_t>(out, 24, blob.payload.size());
    put<std::uint64_t>(out, 32, fnv1a(blob.payload.data(), blob.payload.size()));
    put<std::uint64_t>(out, 40, key);
    if (!blob.payload.empty()) std::memcpy(out.data() + kGridHeaderSize, blob.payload.data(), blob.payload.size());
    return out;
}

GridBlob decode_grid(const std::vector<std::uint8_t>& bytes, std::uint64_t expected_key) {
    if (bytes.size() < kGridHeaderSize || std::memcmp(bytes.data(), kMagic, 8) != 0)
        throw Error("not an RDGRID01 file");
    if (get<std::uint32_t>(bytes, 8) != kVersion) throw Error("unsupported RDGRID version");
    GridBlob b;
    b.dtype = static_cast<GridDtype>(get<std::uint32_t>(bytes, 12));
    b.width = get<std::uint32_t>(bytes, 16);
    b.height = get<std::uint32_t>(bytes, 20);
    const auto size = get<std::uint64_t>(bytes, 24);
    if (element_size(b.dtype) == 0) throw Error("unknown RDGRID dtype");
    if (size != bytes.size() - kGridHeaderSize ||
        size != static_cast<std::uint64_t>(b.width) * b.height * element_size(b.dtype))
        throw Error("RDGRID payload size mismatch");
    if (get<std::uint64_t>(bytes, 40) != expected_key) throw Error("RDGRID key mismatch");
    b.payload.assign(bytes.begin() + kGridHeaderSize, bytes.end());
    if (fnv1a(b.payload.data(), b.payload.size()) != get<std::uint64_t>(bytes, 32))
        throw Error("RDGRID checksum mismatch");
    return b;
}

std::uint64_t GridCache::key(std::uint64_t map_hash, const std::string& stage, const std::string& params) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx|", static_cast<unsigned long long>(map_hash));
    return fnv1a(std::string(buf) + stage + "|" + params);
}

std::filesystem::path GridCache::path_for(std::uint64_t key) const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx.rdgrid", static_cast<unsigned long long>(key));
    return dir_ / buf;
}

std::optional<GridBlob> GridCache::load(std::uint64_t key) {
    if (policy_ == CachePolicy::off) return std::nullopt;
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) {
        ++misses_;
        return std::nullopt;
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    // A corrupt entry is a miss; read_write will overwrite it.
    try {
        GridBlob b = decode_grid(bytes, key);
        ++hits_;
        return b;
    } catch (const Error&) {
        ++misses_;
        return std::nullopt;
    }
}

void GridCache::store(std::uint64_t key, const GridBlob& blob) {
    if (policy_ != CachePolicy::read_write) return;
    std::filesystem::create_directories(dir_);
    const auto bytes = encode_grid(blob, key);
    const auto path = path_for(key);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write cache entry " + tmp);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    std::filesystem::rename(tmp, path);
}

} // namespace rotdev
