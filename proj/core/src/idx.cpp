#include "ocnn/idx.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "ocnn/errors.hpp"

namespace ocnn {

namespace {
constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be32(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

std::string hex32(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%08X", v);
    return buf;
}
}  // namespace

IdxFile parse_idx(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) {
        throw TruncatedPayload(bytes.size(), "stream ends inside the 4-byte magic");
    }
    const std::uint32_t magic = read_be32(bytes.data());
    const std::uint32_t zeros = magic >> 16;
    const std::uint32_t dtype = (magic >> 8) & 0xFF;
    const std::uint32_t ndims = magic & 0xFF;
    if (zeros != 0 || dtype != 0x08 || ndims == 0) {
        throw BadMagic(0, hex32(magic) + " is not an unsigned-byte IDX code");
    }

    const std::size_t header_size = 4 + 4 * static_cast<std::size_t>(ndims);
    if (bytes.size() < header_size) {
        throw TruncatedPayload(bytes.size(), "stream ends inside the dimension table");
    }

    IdxFile out;
    out.magic = magic;
    out.dims.resize(ndims);
    std::uint64_t product = 1;
    for (std::uint32_t i = 0; i < ndims; ++i) {
        const std::size_t off = 4 + 4 * static_cast<std::size_t>(i);
        out.dims[i] = read_be32(bytes.data() + off);
        if (out.dims[i] != 0 &&
            product > std::numeric_limits<std::uint64_t>::max() / out.dims[i]) {
            throw DimensionOverflow(off, "dimension product exceeds 64 bits");
        }
        product *= out.dims[i];
    }
    const std::uint64_t payload_len = bytes.size() - header_size;
    if (payload_len < product) {
        throw TruncatedPayload(bytes.size(), "payload needs " + std::to_string(product) +
                                                 " bytes, stream provides " +
                                                 std::to_string(payload_len));
    }
    if (payload_len > product) {
        throw TruncatedPayload(header_size + product,
                               std::to_string(payload_len - product) +
                                   " trailing bytes after the declared payload");
    }

    out.payload.assign(bytes.begin() + header_size, bytes.end());
    return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("read failure on " + path.string());
    return bytes;
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) {  // 15+16: gzip wrapper
        throw IoError("zlib init failed");
    }
    std::vector<std::uint8_t> out;
    out.reserve(bytes.size() * 4);
    std::uint8_t buf[1 << 16];
    zs.next_in = const_cast<std::uint8_t*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    do {
        zs.next_out = buf;
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw IoError("gzip decompression failed (zlib rc " + std::to_string(rc) + ")");
        }
        out.insert(out.end(), buf, buf + (sizeof(buf) - zs.avail_out));
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

IdxFile read_idx_file(const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes = read_file_bytes(path);
    if (path.extension() == ".gz") {
        bytes = gunzip(bytes);
    }
    return parse_idx(bytes);
}

ImageTensor Dataset::image(int i) const {
    ImageTensor img(width, 1);
    const std::size_t base = static_cast<std::size_t>(i) * width * width;
    for (int r = 0; r < width; ++r) {
        for (int c = 0; c < width; ++c) {
            img.at(r, c, 0) = pixels[base + static_cast<std::size_t>(r) * width + c] / 255.0;
        }
    }
    return img;
}

Dataset load_mnist(const std::filesystem::path& images_path,
                   const std::filesystem::path& labels_path) {
    IdxFile images = read_idx_file(images_path);
    IdxFile labels = read_idx_file(labels_path);

    if (images.magic != kImagesMagic || images.dims.size() != 3) {
        throw BadMagic(0, images_path.string() + " is not an IDX image file");
    }
    if (labels.magic != kLabelsMagic || labels.dims.size() != 1) {
        throw BadMagic(0, labels_path.string() + " is not an IDX label file");
    }
    if (images.dims[1] != images.dims[2]) {
        throw GeometryMismatch("only square images are supported");
    }
    if (images.dims[0] != labels.dims[0]) {
        throw DimensionMismatch("image count " + std::to_string(images.dims[0]) +
                                " does not match label count " + std::to_string(labels.dims[0]));
    }
    for (std::uint8_t l : labels.payload) {
        if (l > 9) throw ValidationError("label value " + std::to_string(l) + " out of range");
    }

    Dataset ds;
    ds.count = static_cast<int>(images.dims[0]);
    ds.width = static_cast<int>(images.dims[1]);
    ds.pixels = std::move(images.payload);
    ds.labels = std::move(labels.payload);
    return ds;
}

}  // namespace ocnn
