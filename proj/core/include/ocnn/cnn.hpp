#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ocnn/linalg.hpp"
#include "ocnn/photonic.hpp"

namespace ocnn {

/// Convolution layer geometry: input width w, kernel width k, stride s,
/// zero-padding p, input channels c, kernel count d. Stride > 1 realizes
/// pooling; the output width (w − k + 2p)/s + 1 must be integral.
struct LayerGeometry {
    int w = 0;
    int k = 0;
    int s = 1;
    int p = 0;
    int c = 1;
    int d = 1;

    void validate() const;                      // throws GeometryMismatch
    int output_width() const;                   // (w − k + 2p)/s + 1
    int patch_length() const { return k * k * c; }
};

struct FullyConnectedShape {
    int in_dim = 0;
    int out_dim = 0;
};

enum class LayerKind { conv, fully_connected };

struct LayerSpec {
    LayerKind kind = LayerKind::conv;
    LayerGeometry geometry;       // valid when kind == conv
    FullyConnectedShape fc;       // valid when kind == fully_connected
    Nonlinearity nonlinearity = Nonlinearity::identity;

    int weight_rows() const;
    int weight_cols() const;
};

/// Ordered layer list with consistent dimension chaining: every conv layer
/// consumes the previous layer's output volume, and fully connected layers
/// (which must come last) consume the flattened volume.
class NetworkSpec {
public:
    explicit NetworkSpec(std::vector<LayerSpec> layers);

    const std::vector<LayerSpec>& layers() const { return layers_; }
    int input_width() const;
    int input_channels() const;
    int output_dim() const;

private:
    std::vector<LayerSpec> layers_;
};

/// Square image volume stored row-major as (row, col, channel).
class ImageTensor {
public:
    ImageTensor(int width, int channels);
    ImageTensor(int width, int channels, std::vector<double> data);

    int width() const { return width_; }
    int channels() const { return channels_; }
    double& at(int r, int c, int ch) { return data_[(static_cast<std::size_t>(r) * width_ + c) * channels_ + ch]; }
    double at(int r, int c, int ch) const { return data_[(static_cast<std::size_t>(r) * width_ + c) * channels_ + ch]; }
    const std::vector<double>& data() const { return data_; }

private:
    int width_;
    int channels_;
    std::vector<double> data_;
};

/// im2col: every k×k×c window of the (optionally zero-padded) image,
/// vectorized in (row, col, channel) order, emitted in row-major patch
/// order. Output count is output_width² and stride > 1 performs the
/// stride-pooling downsample.
PatchStream extract_patches(const ImageTensor& img, const LayerGeometry& g);

/// Reinterprets a layer's time-ordered outputs (one d-vector per timestep,
/// a perfect square of them) as a d-channel image and extracts the next
/// layer's patches from it.
PatchStream repatch(const PatchStream& outputs, const LayerGeometry& g_next);

/// Rebuilds the image form of a layer output stream (inverse of the
/// timestep ordering used by extract_patches with k = s = 1).
ImageTensor stream_to_image(const PatchStream& stream, int width);

/// Deterministic forward pass: conv layers run extract_patches → apply_layer
/// → repatch; fully connected layers apply the kernel matrix to the single
/// flattened patch. Returns the final layer's output scores.
Vec infer(const NetworkSpec& net, const std::vector<KernelMatrix>& weights,
          const ImageTensor& img);

/// Lowest-index argmax.
int argmax_lowest(const Vec& scores);

/// Index set of entries tied with the maximum (exact comparison).
std::vector<int> argmax_ties(const Vec& scores);

/// The reference digit-recognition architecture: two stride-2 convolutions
/// (8 and 16 kernels, 4×4, padding 1, ReLU) followed by 784→64 ReLU and
/// 64→10 linear fully connected layers, for 28×28 single-channel inputs.
NetworkSpec toy_mnist_network();

}  // namespace ocnn
