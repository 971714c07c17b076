#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ocnn/cnn.hpp"

namespace ocnn {

/// Parsed IDX container: big-endian magic, per-dimension sizes, and the raw
/// unsigned-byte payload.
struct IdxFile {
    std::uint32_t magic = 0;
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> payload;
};

/// Parses an IDX byte stream. Only the unsigned-byte element type (0x08) is
/// supported; the dimension count must match the magic's low byte and the
/// payload must hold exactly the product of the dimensions. Errors carry
/// the byte offset of the offending field: BadMagic (offset 0),
/// TruncatedPayload, DimensionOverflow.
IdxFile parse_idx(std::span<const std::uint8_t> bytes);

/// Reads an IDX file from disk; paths ending in ".gz" are decompressed in
/// memory first.
IdxFile read_idx_file(const std::filesystem::path& path);

/// Raw byte payload for gzip-aware file loading (exposed for tests).
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes);

/// Labeled image set held in IDX byte form; pixels scale to [0, 1] when an
/// image is materialized.
struct Dataset {
    int count = 0;
    int width = 0;
    std::vector<std::uint8_t> pixels;  // count·width·width bytes
    std::vector<std::uint8_t> labels;  // count bytes, values 0–9

    ImageTensor image(int i) const;
    int label(int i) const { return labels.at(static_cast<std::size_t>(i)); }
};

/// Loads an MNIST-style image/label pair. The images file must carry magic
/// 0x00000803 with 3 dimensions, the labels file 0x00000801 with 1
/// dimension, and the counts must agree.
Dataset load_mnist(const std::filesystem::path& images_path,
                   const std::filesystem::path& labels_path);

}  // namespace ocnn
