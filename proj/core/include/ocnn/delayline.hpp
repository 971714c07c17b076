#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ocnn/cnn.hpp"
#include "ocnn/photonic.hpp"

namespace ocnn {

/// Repatching delays at one layer boundary, stored as exact integer
/// multiples of the feed period 1/f. dt aligns horizontally adjacent pixels,
/// dT vertically adjacent ones.
struct DelayParams {
    std::int64_t dt = 1;
    std::int64_t dT = 1;
    double f = 1.0;  // feed frequency in Hz

    void validate() const;  // dt >= 1, dT >= dt, f > 0
};

/// Boundary after the first convolution: dt = 1/f and dT spans one output
/// row, (w − k0 + 2p)/s0 + 1 pixel periods.
DelayParams initial_delays(int w, int k0, int s0, int p, double f);

/// Delay recursion across one layer boundary: both delays scale by the
/// producing layer's stride.
DelayParams propagate_delays(const DelayParams& prev, int s_prev);

/// Longest delay line of a bank assembling k×k patches: (k−1)(dT + dt),
/// in units of 1/f.
std::int64_t max_delay_length(int k_j, const DelayParams& params);

/// Full splitter/delay bank for k×k patch assembly. Grid element (r, c)
/// (0-indexed from the top-left of the patch) is delayed by
/// (k−1−r)·dT + (k−1−c)·dt so that every tap aligns when the bottom-right
/// element of a patch is computed.
struct DelayBank {
    int k = 0;
    std::vector<std::int64_t> delays;  // k×k row-major
    std::int64_t max_length = 0;

    static DelayBank build(int k, const DelayParams& params);
    std::int64_t delay(int r, int c) const { return delays[static_cast<std::size_t>(r) * k + c]; }
};

/// One row of a delay-line plan: the width of the image being repatched,
/// plus kernel and stride of the consuming layer. The stride is empty for
/// the final row (nothing downstream to propagate to).
struct DelayPlanRow {
    std::string name;
    int dim = 0;
    int kernel = 0;
    std::optional<int> stride;
};

struct DelayPlanEntry {
    DelayPlanRow row;
    std::int64_t dt = 0;
    std::int64_t dT = 0;
    std::int64_t max_len = 0;
};

/// Applies the delay recursion down a list of plan rows: dt starts at one
/// feed period, dT at the first row's image width, and both multiply by
/// each row's stride going down. Rows are taken at face value (no chaining
/// check), so published fixture tables can be reproduced as printed.
std::vector<DelayPlanEntry> plan_delays(const std::vector<DelayPlanRow>& rows, double f);

/// Builds plan rows for the boundaries of a conv/fc network: one row per
/// consuming layer starting from the second, with fully connected layers
/// treated as convolutions spanning the whole image.
std::vector<DelayPlanRow> delay_rows_from_network(const NetworkSpec& net);

std::vector<DelayPlanEntry> plan_network_delays(const NetworkSpec& net, double f);

/// The published five-row AlexNet delay-line fixture.
std::vector<DelayPlanRow> table1_rows();

/// Sampling bookkeeping over one frame of w×w pixel emissions: total slots
/// = w², and every slot is either a valid patch-formation instant or not.
struct SamplingSchedule {
    std::vector<std::int64_t> valid_times;    // in units of 1/f, ascending
    std::vector<std::int64_t> invalid_times;  // remaining emission slots
    std::int64_t period_slots = 0;            // w²

    std::int64_t invalid_count() const {
        return static_cast<std::int64_t>(invalid_times.size());
    }
};

struct RepatchSimResult {
    SamplingSchedule schedule;
    PatchStream patches;  // gathered at valid times, in time order
};

/// Discrete-time simulation of the splitter/delay bank. The producing
/// layer's outputs stream in as a d-channel pixel sequence (pixel (r, c)
/// emitted at r·dT + c·dt); every channel is split into k² taps delayed per
/// DelayBank; an emission slot is valid iff the gathered tap values form a
/// stride-aligned contiguous patch of the image. Gathered patches equal
/// repatch(outputs, g_next) in patch order. The simulator models unpadded
/// boundaries only (g_next.p must be 0).
RepatchSimResult simulate_repatching(const PatchStream& outputs, const LayerGeometry& g_next,
                                     const DelayParams& params);

}  // namespace ocnn
