#include "ocnn/train.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "ocnn/errors.hpp"
#include "ocnn/rng.hpp"

namespace ocnn {

namespace {

struct ConvPlan {
    LayerGeometry g;
    int out_width = 0;
    int timesteps = 0;  // out_width²
};

// Gathers the im2col patch matrix for a batch of flat (r, c, ch) volumes.
Mat im2col_batch(const Mat& x, const ConvPlan& plan) {
    const LayerGeometry& g = plan.g;
    const Eigen::Index batch = x.rows();
    Mat patches(batch * plan.timesteps, g.patch_length());
    for (Eigen::Index b = 0; b < batch; ++b) {
        const double* src = x.data() + b * x.cols();
        Eigen::Index t = b * plan.timesteps;
        for (int pr = 0; pr < plan.out_width; ++pr) {
            for (int pc = 0; pc < plan.out_width; ++pc, ++t) {
                double* dst = patches.data() + t * patches.cols();
                Eigen::Index idx = 0;
                for (int kr = 0; kr < g.k; ++kr) {
                    const int r = pr * g.s + kr - g.p;
                    for (int kc = 0; kc < g.k; ++kc) {
                        const int c = pc * g.s + kc - g.p;
                        const bool inside = r >= 0 && r < g.w && c >= 0 && c < g.w;
                        const double* px =
                            src + (static_cast<Eigen::Index>(r) * g.w + c) * g.c;
                        for (int ch = 0; ch < g.c; ++ch, ++idx) {
                            dst[idx] = inside ? px[ch] : 0.0;
                        }
                    }
                }
            }
        }
    }
    return patches;
}

// Scatter-adds patch gradients back onto the input volumes (inverse of
// im2col under summation).
Mat col2im_batch(const Mat& dpatches, const ConvPlan& plan, Eigen::Index batch) {
    const LayerGeometry& g = plan.g;
    Mat dx = Mat::Zero(batch, static_cast<Eigen::Index>(g.w) * g.w * g.c);
    for (Eigen::Index b = 0; b < batch; ++b) {
        double* dst = dx.data() + b * dx.cols();
        Eigen::Index t = b * plan.timesteps;
        for (int pr = 0; pr < plan.out_width; ++pr) {
            for (int pc = 0; pc < plan.out_width; ++pc, ++t) {
                const double* src = dpatches.data() + t * dpatches.cols();
                Eigen::Index idx = 0;
                for (int kr = 0; kr < g.k; ++kr) {
                    const int r = pr * g.s + kr - g.p;
                    for (int kc = 0; kc < g.k; ++kc) {
                        const int c = pc * g.s + kc - g.p;
                        const bool inside = r >= 0 && r < g.w && c >= 0 && c < g.w;
                        double* px = dst + (static_cast<Eigen::Index>(r) * g.w + c) * g.c;
                        for (int ch = 0; ch < g.c; ++ch, ++idx) {
                            if (inside) px[ch] += src[idx];
                        }
                    }
                }
            }
        }
    }
    return dx;
}

void apply_nl_inplace(Mat& z, Nonlinearity nl) {
    switch (nl) {
        case Nonlinearity::identity: return;
        case Nonlinearity::relu: z = z.cwiseMax(0.0); return;
        case Nonlinearity::sigmoid:
            z = ((-z.array()).exp() + 1.0).inverse().matrix();
            return;
        case Nonlinearity::tanh: z = z.array().tanh().matrix(); return;
    }
}

// Derivative with respect to the pre-activation, expressed through the
// activated value a = nl(z).
Mat nl_grad_from_activation(const Mat& a, Nonlinearity nl) {
    switch (nl) {
        case Nonlinearity::identity: return Mat::Ones(a.rows(), a.cols());
        case Nonlinearity::relu: return (a.array() > 0.0).cast<double>().matrix();
        case Nonlinearity::sigmoid: return (a.array() * (1.0 - a.array())).matrix();
        case Nonlinearity::tanh: return (1.0 - a.array().square()).matrix();
    }
    throw ValidationError("unknown nonlinearity enum value");
}

struct ForwardState {
    std::vector<Mat> inputs;       // per layer: X (flat volumes) or patch matrix source
    std::vector<Mat> patch_mats;   // conv layers: im2col matrix
    std::vector<Mat> activations;  // per layer: post-nonlinearity (stream-shaped for conv)
};

// Runs the batch through the network; returns final scores (batch × out).
Mat forward_batch(const NetworkSpec& net, const std::vector<Mat>& w, const Mat& x0,
                  const std::vector<ConvPlan>& plans, ForwardState* state) {
    Mat x = x0;
    const Eigen::Index batch = x0.rows();
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        const LayerSpec& layer = net.layers()[i];
        if (state) state->inputs.push_back(x);
        if (layer.kind == LayerKind::conv) {
            const ConvPlan& plan = plans[i];
            Mat patches = im2col_batch(x, plan);
            Mat a = patches * w[i].transpose();  // (batch·T) × d
            apply_nl_inplace(a, layer.nonlinearity);
            // Row-major (batch·T) × d reinterprets directly as batch × (T·d).
            x = Eigen::Map<const Mat>(a.data(), batch, a.size() / batch);
            if (state) {
                state->patch_mats.push_back(std::move(patches));
                state->activations.push_back(std::move(a));
            }
        } else {
            Mat a = x * w[i].transpose();
            apply_nl_inplace(a, layer.nonlinearity);
            if (state) {
                state->patch_mats.emplace_back();
                state->activations.push_back(a);
            }
            x = std::move(a);
        }
    }
    return x;
}

std::vector<ConvPlan> build_plans(const NetworkSpec& net) {
    std::vector<ConvPlan> plans(net.layers().size());
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        const LayerSpec& layer = net.layers()[i];
        if (layer.kind == LayerKind::conv) {
            const int ow = layer.geometry.output_width();
            plans[i] = {layer.geometry, ow, ow * ow};
        }
    }
    return plans;
}

Mat dataset_rows(const Dataset& data, const std::vector<int>& indices) {
    const int dim = data.width * data.width;
    Mat x(static_cast<Eigen::Index>(indices.size()), dim);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const std::size_t base = static_cast<std::size_t>(indices[i]) * dim;
        for (int j = 0; j < dim; ++j) x(static_cast<Eigen::Index>(i), j) = data.pixels[base + j] / 255.0;
    }
    return x;
}

// Mean cross-entropy and, if dscores != nullptr, its gradient.
double softmax_cross_entropy(const Mat& scores, const std::vector<int>& labels, Mat* dscores) {
    const Eigen::Index batch = scores.rows();
    double loss = 0.0;
    if (dscores) *dscores = Mat(batch, scores.cols());
    for (Eigen::Index b = 0; b < batch; ++b) {
        const double mx = scores.row(b).maxCoeff();
        Eigen::ArrayXd e = (scores.row(b).array() - mx).exp();
        const double z = e.sum();
        loss += std::log(z) - (scores(b, labels[b]) - mx);
        if (dscores) {
            dscores->row(b) = (e / z).matrix();
            (*dscores)(b, labels[b]) -= 1.0;
            dscores->row(b) /= static_cast<double>(batch);
        }
    }
    return loss / static_cast<double>(batch);
}

// Deterministic Fisher-Yates so shuffles do not depend on the standard
// library's std::shuffle implementation.
void shuffle_indices(std::vector<int>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = gen() % i;
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

std::vector<KernelMatrix> init_weights(const NetworkSpec& net, std::uint64_t seed) {
    std::vector<KernelMatrix> weights;
    weights.reserve(net.layers().size());
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        const LayerSpec& layer = net.layers()[i];
        NormalSampler normal(derive_seed(seed, i));
        const int rows = layer.weight_rows();
        const int cols = layer.weight_cols();
        const double scale = std::sqrt(2.0 / cols);
        Mat m(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) m(r, c) = scale * normal();
        }
        weights.emplace_back(std::move(m));
    }
    return weights;
}

TrainResult train_reference(const NetworkSpec& net, const Dataset& train, const Dataset* eval,
                            const TrainConfig& cfg) {
    if (cfg.epochs < 1 || cfg.batch_size < 1 || cfg.learning_rate <= 0.0) {
        throw ValidationError("bad training configuration");
    }
    const int count = cfg.subset > 0 ? std::min(cfg.subset, train.count) : train.count;
    if (count < 1) throw ValidationError("empty training set");

    const std::vector<ConvPlan> plans = build_plans(net);

    std::vector<Mat> w;
    for (const KernelMatrix& km : init_weights(net, cfg.seed)) w.push_back(km.matrix());

    // Adam state
    std::vector<Mat> m1, m2;
    for (const Mat& wi : w) {
        m1.push_back(Mat::Zero(wi.rows(), wi.cols()));
        m2.push_back(Mat::Zero(wi.rows(), wi.cols()));
    }
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long step = 0;

    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;

    // Loss at initialization over the training subset.
    {
        double total = 0.0;
        for (int start = 0; start < count; start += cfg.batch_size) {
            const int bs = std::min(cfg.batch_size, count - start);
            std::vector<int> idx(order.begin() + start, order.begin() + start + bs);
            std::vector<int> labels(bs);
            for (int b = 0; b < bs; ++b) labels[b] = train.label(idx[b]);
            const Mat scores = forward_batch(net, w, dataset_rows(train, idx), plans, nullptr);
            total += softmax_cross_entropy(scores, labels, nullptr) * bs;
        }
        result.initial_loss = total / count;
    }

    std::mt19937_64 shuffle_gen(derive_seed(cfg.seed, 0xF00D));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_indices(order, shuffle_gen);
        double epoch_loss = 0.0;

        for (int start = 0; start < count; start += cfg.batch_size) {
            const int bs = std::min(cfg.batch_size, count - start);
            std::vector<int> idx(order.begin() + start, order.begin() + start + bs);
            std::vector<int> labels(bs);
            for (int b = 0; b < bs; ++b) labels[b] = train.label(idx[b]);

            ForwardState state;
            const Mat scores =
                forward_batch(net, w, dataset_rows(train, idx), plans, &state);
            Mat grad_out;
            epoch_loss += softmax_cross_entropy(scores, labels, &grad_out) * bs;

            // Backward pass; grad_out holds dL/d(layer output) throughout.
            std::vector<Mat> dw(w.size());
            for (int i = static_cast<int>(net.layers().size()) - 1; i >= 0; --i) {
                const LayerSpec& layer = net.layers()[i];
                if (layer.kind == LayerKind::conv) {
                    const ConvPlan& plan = plans[i];
                    const Mat& a = state.activations[i];  // (bs·T) × d
                    Mat dz = Eigen::Map<const Mat>(grad_out.data(), a.rows(), a.cols());
                    dz = dz.cwiseProduct(nl_grad_from_activation(a, layer.nonlinearity));
                    dw[i] = dz.transpose() * state.patch_mats[i];
                    if (i > 0) {
                        const Mat dpatches = dz * w[i];
                        grad_out = col2im_batch(dpatches, plan, bs);
                    }
                } else {
                    const Mat& a = state.activations[i];
                    Mat dz = grad_out.cwiseProduct(nl_grad_from_activation(a, layer.nonlinearity));
                    dw[i] = dz.transpose() * state.inputs[i];
                    if (i > 0) grad_out = dz * w[i];
                }
            }

            ++step;
            const double bc1 = 1.0 - std::pow(beta1, step);
            const double bc2 = 1.0 - std::pow(beta2, step);
            for (std::size_t i = 0; i < w.size(); ++i) {
                m1[i] = beta1 * m1[i] + (1.0 - beta1) * dw[i];
                m2[i] = beta2 * m2[i] + (1.0 - beta2) * dw[i].cwiseProduct(dw[i]);
                w[i] -= (cfg.learning_rate / bc1) *
                        m1[i].cwiseQuotient(((m2[i] / bc2).cwiseSqrt().array() + eps).matrix());
            }
        }
        result.epoch_losses.push_back(epoch_loss / count);
    }

    for (Mat& wi : w) result.weights.emplace_back(std::move(wi));

    if (eval != nullptr) {
        result.eval_accuracy = evaluate_accuracy(net, result.weights, *eval);
        if (cfg.min_accuracy > 0.0 && result.eval_accuracy < cfg.min_accuracy) {
            throw NonConvergence("eval accuracy " + std::to_string(result.eval_accuracy) +
                                 " below target " + std::to_string(cfg.min_accuracy) + " after " +
                                 std::to_string(cfg.epochs) + " epochs");
        }
    }
    return result;
}

Mat forward_scores(const NetworkSpec& net, const std::vector<KernelMatrix>& weights,
                   const Dataset& data, const std::vector<int>& indices) {
    const std::vector<ConvPlan> plans = build_plans(net);
    std::vector<Mat> w;
    for (const KernelMatrix& km : weights) w.push_back(km.matrix());

    Mat scores(static_cast<Eigen::Index>(indices.size()), net.output_dim());
    constexpr int kBatch = 256;
    for (std::size_t start = 0; start < indices.size(); start += kBatch) {
        const std::size_t bs = std::min<std::size_t>(kBatch, indices.size() - start);
        std::vector<int> idx(indices.begin() + start, indices.begin() + start + bs);
        scores.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(bs)) =
            forward_batch(net, w, dataset_rows(data, idx), plans, nullptr);
    }
    return scores;
}

double evaluate_accuracy(const NetworkSpec& net, const std::vector<KernelMatrix>& weights,
                         const Dataset& data, int limit) {
    const int count = limit > 0 ? std::min(limit, data.count) : data.count;
    std::vector<int> indices(count);
    std::iota(indices.begin(), indices.end(), 0);
    const Mat scores = forward_scores(net, weights, data, indices);
    int correct = 0;
    for (int i = 0; i < count; ++i) {
        Vec row = scores.row(i).transpose();
        if (argmax_lowest(row) == data.label(indices[i])) ++correct;
    }
    return static_cast<double>(correct) / count;
}

}  // namespace ocnn
