#include "ocnn/delayline.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ocnn/errors.hpp"

namespace ocnn {

void DelayParams::validate() const {
    if (dt < 1 || dT < dt || !(f > 0.0)) {
        throw GeometryMismatch("delay params out of range (dt=" + std::to_string(dt) +
                               " dT=" + std::to_string(dT) + " f=" + std::to_string(f) + ")");
    }
}

DelayParams initial_delays(int w, int k0, int s0, int p, double f) {
    LayerGeometry g{w, k0, s0, p, 1, 1};
    g.validate();
    if (!(f > 0.0)) throw GeometryMismatch("feed frequency must be positive");
    DelayParams out{1, g.output_width(), f};
    out.validate();
    return out;
}

DelayParams propagate_delays(const DelayParams& prev, int s_prev) {
    prev.validate();
    if (s_prev < 1) throw GeometryMismatch("stride must be >= 1");
    return DelayParams{prev.dt * s_prev, prev.dT * s_prev, prev.f};
}

std::int64_t max_delay_length(int k_j, const DelayParams& params) {
    params.validate();
    if (k_j < 1) throw GeometryMismatch("kernel size must be >= 1");
    return static_cast<std::int64_t>(k_j - 1) * (params.dT + params.dt);
}

DelayBank DelayBank::build(int k, const DelayParams& params) {
    params.validate();
    if (k < 1) throw GeometryMismatch("kernel size must be >= 1");
    DelayBank bank;
    bank.k = k;
    bank.delays.resize(static_cast<std::size_t>(k) * k);
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            bank.delays[static_cast<std::size_t>(r) * k + c] =
                static_cast<std::int64_t>(k - 1 - r) * params.dT +
                static_cast<std::int64_t>(k - 1 - c) * params.dt;
        }
    }
    bank.max_length = max_delay_length(k, params);
    return bank;
}

std::vector<DelayPlanEntry> plan_delays(const std::vector<DelayPlanRow>& rows, double f) {
    if (rows.empty()) throw GeometryMismatch("delay plan needs at least one row");
    if (!(f > 0.0)) throw GeometryMismatch("feed frequency must be positive");

    std::vector<DelayPlanEntry> plan;
    plan.reserve(rows.size());
    std::int64_t dt = 1;
    std::int64_t dT = rows.front().dim;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const DelayPlanRow& row = rows[i];
        if (row.dim < 1 || row.kernel < 1 || (row.stride && *row.stride < 1)) {
            throw GeometryMismatch("delay plan row " + std::to_string(i) + " out of range");
        }
        DelayPlanEntry e;
        e.row = row;
        e.dt = dt;
        e.dT = dT;
        e.max_len = static_cast<std::int64_t>(row.kernel - 1) * (dT + dt);
        plan.push_back(e);

        if (i + 1 < rows.size()) {
            if (!row.stride) {
                throw GeometryMismatch("row " + std::to_string(i) +
                                       " needs a stride to propagate delays");
            }
            dt *= *row.stride;
            dT *= *row.stride;
        }
    }
    return plan;
}

std::vector<DelayPlanRow> delay_rows_from_network(const NetworkSpec& net) {
    std::vector<DelayPlanRow> rows;
    int width = 0;
    int prev_out_width = 0;
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        const LayerSpec& layer = net.layers()[i];
        int kernel = 0;
        std::optional<int> stride;
        if (layer.kind == LayerKind::conv) {
            width = layer.geometry.w;
            kernel = layer.geometry.k;
            stride = layer.geometry.s;
            prev_out_width = layer.geometry.output_width();
        } else {
            // Fully connected layers consume the whole image as one patch.
            width = prev_out_width > 0 ? prev_out_width : 1;
            kernel = width;
            stride = std::nullopt;
            prev_out_width = 1;
        }
        if (i == 0) continue;  // patches for the first layer arrive pre-formed
        rows.push_back({"layer" + std::to_string(i + 1), width, kernel, stride});
    }
    return rows;
}

std::vector<DelayPlanEntry> plan_network_delays(const NetworkSpec& net, double f) {
    return plan_delays(delay_rows_from_network(net), f);
}

std::vector<DelayPlanRow> table1_rows() {
    return {
        {"1st-ConvLayer", 55, 5, 2},
        {"2nd-ConvLayer", 27, 3, 2},
        {"3rd-ConvLayer", 13, 3, 2},
        {"4th-ConvLayer", 13, 3, 1},
        {"5th-ConvLayer", 13, 13, std::nullopt},
    };
}

RepatchSimResult simulate_repatching(const PatchStream& outputs, const LayerGeometry& g_next,
                                     const DelayParams& params) {
    params.validate();
    g_next.validate();
    if (g_next.p != 0) {
        throw GeometryMismatch("the temporal simulator models unpadded boundaries only");
    }

    const int n = outputs.size();
    const int w = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (w * w != n) {
        throw GeometryMismatch("output stream length " + std::to_string(n) +
                               " is not a perfect square");
    }
    if (g_next.w != w) {
        throw GeometryMismatch("next layer expects width " + std::to_string(g_next.w) +
                               " but stream forms width " + std::to_string(w));
    }
    if (g_next.c != outputs.length()) {
        throw GeometryMismatch("next layer expects " + std::to_string(g_next.c) +
                               " channels but stream carries " + std::to_string(outputs.length()));
    }
    if (params.dT < static_cast<std::int64_t>(w) * params.dt) {
        throw GeometryMismatch("row delay shorter than one emitted row; params do not match the "
                               "producing geometry");
    }

    const int k = g_next.k;
    const int s = g_next.s;
    const int d = outputs.length();
    const DelayBank bank = DelayBank::build(k, params);

    // Emission lattice: pixel (r, c) of the w×w image appears on the line at
    // time r·dT + c·dt.
    std::unordered_map<std::int64_t, int> emitted_at;  // time -> pixel index r·w + c
    std::vector<std::int64_t> slots;
    slots.reserve(static_cast<std::size_t>(n));
    for (int r = 0; r < w; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int64_t t = r * params.dT + c * params.dt;
            emitted_at.emplace(t, r * w + c);
            slots.push_back(t);
        }
    }
    std::sort(slots.begin(), slots.end());

    const int out_w = g_next.output_width();
    SamplingSchedule schedule;
    schedule.period_slots = n;
    Mat gathered(static_cast<Eigen::Index>(out_w) * out_w, static_cast<Eigen::Index>(k) * k * d);
    Eigen::Index patch_count = 0;

    for (const std::int64_t t : slots) {
        // Each tap (tr, tc) holds the pixel emitted delay(tr, tc) ago.
        bool complete = true;
        int anchor_r = 0, anchor_c = 0;
        std::vector<int> tap_pixel(static_cast<std::size_t>(k) * k);
        for (int tr = 0; tr < k && complete; ++tr) {
            for (int tc = 0; tc < k && complete; ++tc) {
                const auto it = emitted_at.find(t - bank.delay(tr, tc));
                if (it == emitted_at.end()) {
                    complete = false;
                    break;
                }
                tap_pixel[static_cast<std::size_t>(tr) * k + tc] = it->second;
                if (tr == 0 && tc == 0) {
                    anchor_r = it->second / w;
                    anchor_c = it->second % w;
                }
            }
        }

        // Valid iff the taps hold exactly the contiguous patch anchored at
        // (anchor_r, anchor_c) and that anchor is stride-aligned in bounds.
        bool valid = complete;
        if (valid) {
            valid = anchor_r % s == 0 && anchor_c % s == 0 && anchor_r + k <= w &&
                    anchor_c + k <= w;
        }
        if (valid) {
            for (int tr = 0; tr < k && valid; ++tr) {
                for (int tc = 0; tc < k; ++tc) {
                    if (tap_pixel[static_cast<std::size_t>(tr) * k + tc] !=
                        (anchor_r + tr) * w + (anchor_c + tc)) {
                        valid = false;
                        break;
                    }
                }
            }
        }

        if (valid) {
            schedule.valid_times.push_back(t);
            for (int tr = 0; tr < k; ++tr) {
                for (int tc = 0; tc < k; ++tc) {
                    const int px = tap_pixel[static_cast<std::size_t>(tr) * k + tc];
                    for (int ch = 0; ch < d; ++ch) {
                        gathered(patch_count, (static_cast<Eigen::Index>(tr) * k + tc) * d + ch) =
                            outputs.matrix()(px, ch);
                    }
                }
            }
            ++patch_count;
        } else {
            schedule.invalid_times.push_back(t);
        }
    }

    return RepatchSimResult{std::move(schedule),
                            PatchStream(gathered.topRows(patch_count))};
}

}  // namespace ocnn
