#include "ocnn/cnn.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ocnn/errors.hpp"

namespace ocnn {

void LayerGeometry::validate() const {
    if (w < 1 || k < 1 || s < 1 || p < 0 || c < 1 || d < 1) {
        throw GeometryMismatch("geometry fields out of range (w=" + std::to_string(w) +
                               " k=" + std::to_string(k) + " s=" + std::to_string(s) +
                               " p=" + std::to_string(p) + " c=" + std::to_string(c) +
                               " d=" + std::to_string(d) + ")");
    }
    if (k > w + 2 * p) {
        throw GeometryMismatch("kernel wider than padded image (k=" + std::to_string(k) +
                               ", w+2p=" + std::to_string(w + 2 * p) + ")");
    }
    if ((w - k + 2 * p) % s != 0) {
        throw GeometryMismatch("output width not integral: (w-k+2p)=" +
                               std::to_string(w - k + 2 * p) + " not divisible by s=" +
                               std::to_string(s));
    }
}

int LayerGeometry::output_width() const { return (w - k + 2 * p) / s + 1; }

int LayerSpec::weight_rows() const {
    return kind == LayerKind::conv ? geometry.d : fc.out_dim;
}

int LayerSpec::weight_cols() const {
    return kind == LayerKind::conv ? geometry.patch_length() : fc.in_dim;
}

NetworkSpec::NetworkSpec(std::vector<LayerSpec> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw GeometryMismatch("network needs at least one layer");

    bool seen_fc = false;
    int width = 0;
    int channels = 0;
    int flat = 0;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const LayerSpec& l = layers_[i];
        if (l.kind == LayerKind::conv) {
            if (seen_fc) {
                throw GeometryMismatch("conv layer after fully connected layer");
            }
            l.geometry.validate();
            if (i > 0 && (l.geometry.w != width || l.geometry.c != channels)) {
                throw GeometryMismatch(
                    "layer " + std::to_string(i) + " expects " + std::to_string(l.geometry.w) +
                    "x" + std::to_string(l.geometry.w) + "x" + std::to_string(l.geometry.c) +
                    " but receives " + std::to_string(width) + "x" + std::to_string(width) + "x" +
                    std::to_string(channels));
            }
            width = l.geometry.output_width();
            channels = l.geometry.d;
            flat = width * width * channels;
        } else {
            if (l.fc.in_dim < 1 || l.fc.out_dim < 1) {
                throw GeometryMismatch("fully connected dims must be >= 1");
            }
            if (i > 0 && l.fc.in_dim != flat) {
                throw GeometryMismatch("layer " + std::to_string(i) + " expects in_dim " +
                                       std::to_string(l.fc.in_dim) + " but receives " +
                                       std::to_string(flat));
            }
            seen_fc = true;
            flat = l.fc.out_dim;
        }
    }
}

int NetworkSpec::input_width() const {
    const LayerSpec& first = layers_.front();
    if (first.kind == LayerKind::conv) return first.geometry.w;
    return 0;  // pure fully connected networks have no image geometry
}

int NetworkSpec::input_channels() const {
    const LayerSpec& first = layers_.front();
    return first.kind == LayerKind::conv ? first.geometry.c : 1;
}

int NetworkSpec::output_dim() const {
    const LayerSpec& last = layers_.back();
    if (last.kind == LayerKind::fully_connected) return last.fc.out_dim;
    const int ow = last.geometry.output_width();
    return ow * ow * last.geometry.d;
}

ImageTensor::ImageTensor(int width, int channels)
    : width_(width), channels_(channels),
      data_(static_cast<std::size_t>(width) * width * channels, 0.0) {
    if (width < 1 || channels < 1) throw GeometryMismatch("image dimensions must be >= 1");
}

ImageTensor::ImageTensor(int width, int channels, std::vector<double> data)
    : width_(width), channels_(channels), data_(std::move(data)) {
    if (width < 1 || channels < 1) throw GeometryMismatch("image dimensions must be >= 1");
    if (data_.size() != static_cast<std::size_t>(width) * width * channels) {
        throw GeometryMismatch("image buffer size does not match dimensions");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) throw ValidationError("image has non-finite entries");
    }
}

PatchStream extract_patches(const ImageTensor& img, const LayerGeometry& g) {
    g.validate();
    if (img.width() != g.w || img.channels() != g.c) {
        throw GeometryMismatch("image " + std::to_string(img.width()) + "x" +
                               std::to_string(img.width()) + "x" +
                               std::to_string(img.channels()) + " does not match geometry " +
                               std::to_string(g.w) + "/" + std::to_string(g.c));
    }

    const int ow = g.output_width();
    Mat patches(static_cast<Eigen::Index>(ow) * ow, g.patch_length());
    Eigen::Index t = 0;
    for (int pr = 0; pr < ow; ++pr) {
        for (int pc = 0; pc < ow; ++pc, ++t) {
            Eigen::Index idx = 0;
            for (int kr = 0; kr < g.k; ++kr) {
                for (int kc = 0; kc < g.k; ++kc) {
                    const int r = pr * g.s + kr - g.p;
                    const int c = pc * g.s + kc - g.p;
                    const bool inside = r >= 0 && r < g.w && c >= 0 && c < g.w;
                    for (int ch = 0; ch < g.c; ++ch, ++idx) {
                        patches(t, idx) = inside ? img.at(r, c, ch) : 0.0;
                    }
                }
            }
        }
    }
    return PatchStream(std::move(patches));
}

ImageTensor stream_to_image(const PatchStream& stream, int width) {
    if (stream.size() != width * width) {
        throw GeometryMismatch("stream of " + std::to_string(stream.size()) +
                               " outputs cannot form a " + std::to_string(width) + "x" +
                               std::to_string(width) + " image");
    }
    ImageTensor img(width, stream.length());
    for (int t = 0; t < stream.size(); ++t) {
        const int r = t / width;
        const int c = t % width;
        for (int ch = 0; ch < stream.length(); ++ch) img.at(r, c, ch) = stream.matrix()(t, ch);
    }
    return img;
}

PatchStream repatch(const PatchStream& outputs, const LayerGeometry& g_next) {
    const int n = outputs.size();
    const int width = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (width * width != n) {
        throw GeometryMismatch("output stream length " + std::to_string(n) +
                               " is not a perfect square");
    }
    if (g_next.w != width) {
        throw GeometryMismatch("next layer expects width " + std::to_string(g_next.w) +
                               " but stream forms width " + std::to_string(width));
    }
    return extract_patches(stream_to_image(outputs, width), g_next);
}

int argmax_lowest(const Vec& scores) {
    int best = 0;
    for (int i = 1; i < scores.size(); ++i) {
        if (scores(i) > scores(best)) best = i;
    }
    return best;
}

std::vector<int> argmax_ties(const Vec& scores) {
    const double top = scores.maxCoeff();
    std::vector<int> ties;
    for (int i = 0; i < scores.size(); ++i) {
        if (scores(i) == top) ties.push_back(i);
    }
    return ties;
}

Vec infer(const NetworkSpec& net, const std::vector<KernelMatrix>& weights,
          const ImageTensor& img) {
    if (weights.size() != net.layers().size()) {
        throw DimensionMismatch("network has " + std::to_string(net.layers().size()) +
                                " layers but " + std::to_string(weights.size()) +
                                " weight matrices were supplied");
    }

    ImageTensor current = img;
    Eigen::RowVectorXd flat;
    bool is_flat = false;

    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        const LayerSpec& layer = net.layers()[i];
        const KernelMatrix& m = weights[i];
        if (m.rows() != layer.weight_rows() || m.cols() != layer.weight_cols()) {
            throw DimensionMismatch("weight matrix " + std::to_string(i) + " is " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                    " but layer needs " + std::to_string(layer.weight_rows()) +
                                    "x" + std::to_string(layer.weight_cols()));
        }

        if (layer.kind == LayerKind::conv) {
            const PatchStream patches = extract_patches(current, layer.geometry);
            const PatchStream out = apply_layer(m, patches, layer.nonlinearity);
            current = stream_to_image(out, layer.geometry.output_width());
        } else {
            if (!is_flat) {
                flat = Eigen::Map<const Eigen::RowVectorXd>(current.data().data(),
                                                            current.data().size());
                is_flat = true;
            }
            Mat one_patch = flat;
            const PatchStream out =
                apply_layer(m, PatchStream(std::move(one_patch)), layer.nonlinearity);
            flat = out.matrix().row(0);
        }
    }

    if (is_flat) return flat.transpose();
    return Eigen::Map<const Vec>(current.data().data(), current.data().size());
}

NetworkSpec toy_mnist_network() {
    std::vector<LayerSpec> layers(4);
    layers[0] = {LayerKind::conv, {28, 4, 2, 1, 1, 8}, {}, Nonlinearity::relu};
    layers[1] = {LayerKind::conv, {14, 4, 2, 1, 8, 16}, {}, Nonlinearity::relu};
    layers[2] = {LayerKind::fully_connected, {}, {784, 64}, Nonlinearity::relu};
    layers[3] = {LayerKind::fully_connected, {}, {64, 10}, Nonlinearity::identity};
    return NetworkSpec(std::move(layers));
}

}  // namespace ocnn
