#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ocnn {

/// One architecture row for the energy models: vectorized kernel length
/// (k·k·c), patch count fed per inference, and the number of kernels (or
/// equivalently output units) of the layer.
struct ArchLayer {
    std::string name;
    std::int64_t kernel_size = 0;
    std::int64_t num_patches = 0;
    std::int64_t num_units = 0;
};

using ArchTable = std::vector<ArchLayer>;

/// The eight-layer AlexNet table used by all three published energy models
/// (five convolutions and three fully connected layers).
ArchTable alexnet_arch_table();

/// Rounds to `digits` significant figures (round half away from zero).
/// The published tables print rounded per-layer values; the reports keep
/// both the exact and the as-printed numbers.
double round_sig(double x, int digits);

// ---------------------------------------------------------------------------
// Optical model
// ---------------------------------------------------------------------------

struct OpticalEnergyParams {
    double p0_w = 0.05e-3;              // trigger power per waveguide
    double f_hz = 3e9;                  // feed throughput
    double amplifier_wall_plug = 0.10;  // amplifier efficiency
    double pulses_per_waveguide = 3025; // first-layer patch count
};

struct OpticalLayerRow {
    std::string name;
    std::int64_t units = 0;
    std::int64_t patches = 0;
    double energy_j = 0.0;        // units × patches × E, with E as printed
    double energy_exact_j = 0.0;  // same with the unrounded E
};

struct OpticalEnergyReport {
    std::vector<OpticalLayerRow> rows;
    double e_waveguide_j = 0.0;        // per-signal nonlinearity energy, unrounded
    double e_waveguide_table_j = 0.0;  // rounded to one significant figure, as published
    double total_j = 0.0;              // sum of rows (as-printed column)
    double total_exact_j = 0.0;        // sum of rows (exact column)
    double eq1_coefficient = 0.0;      // total_exact = coeff · Δt · P0
    double eq1_power_w = 0.0;          // coeff · Δt · P0 evaluated at the given params
};

/// Per-inference optical energy. Each nonlinearity unit needs
/// E = pulses · (1/wall_plug) · P0 / f per signal; a layer costs
/// units × patches × E. The published table multiplies with E rounded to
/// one significant figure; both columns are reported, along with the
/// closed-form coefficient of total = coeff · Δt · P0.
OpticalEnergyReport optical_energy(const ArchTable& arch, const OpticalEnergyParams& p);

// ---------------------------------------------------------------------------
// Electronic model
// ---------------------------------------------------------------------------

struct ElectronicLayerRow {
    std::string name;
    std::int64_t kernel_size = 0;
    std::int64_t patches = 0;
    std::int64_t kernels = 0;
    std::int64_t flops = 0;  // kernel_size × patches × kernels × 2
};

struct ElectronicEnergyReport {
    std::vector<ElectronicLayerRow> rows;
    std::int64_t total_flops = 0;
    double energy_j = 0.0;        // total / rate × power
    double time_per_image_s = 0.0;
};

ElectronicEnergyReport electronic_energy(const ArchTable& arch, double rate_flops_per_s,
                                         double power_w);

/// Optical inference latency (first-layer patches at the feed rate) and the
/// speedup over a given electronic time.
struct OpticalTiming {
    double time_s = 0.0;
    double speedup_vs_electronic = 0.0;
};

OpticalTiming optical_time(std::int64_t first_layer_patches, double f_hz,
                           double electronic_time_s);

// ---------------------------------------------------------------------------
// Optical-electronic hybrid model
// ---------------------------------------------------------------------------

struct HybridEnergyParams {
    double tia_j_per_sample = 20e-12;
    double modulator_driver_j_per_sample = 100e-12;
    double analog_memory_j_per_sample = 100e-12;
    double laser_power_w = 2.0;
    double modulation_hz = 1e9;
    double monolithic_j_per_sample = 5e-15;
};

/// Analog-memory cost behind the default 100 pJ/sample figure:
/// C·V² × number of capacitors.
double analog_memory_energy_per_sample(double capacitance_f, double voltage_v, int num_caps);

struct HybridLayerRow {
    std::string name;
    std::int64_t kernel_size = 0;
    std::int64_t patches = 0;
    std::int64_t ops_exact = 0;  // kernel_size × patches × 2
    double ops_table = 0.0;      // rounded to three significant figures, as published
};

struct HybridEnergyReport {
    std::vector<HybridLayerRow> rows;
    std::int64_t total_ops_exact = 0;
    double total_ops_table = 0.0;
    double analog_energy_j = 0.0;      // total_ops_table × Σ(per-sample costs)
    double analog_energy_exact_j = 0.0;
    std::int64_t total_patches = 0;    // Σ patches over all layers
    double laser_energy_j = 0.0;       // laser_power × total_patches / modulation
    double monolithic_energy_j = 0.0;  // total_ops_table × monolithic cost
};

/// Analog-domain energy of the hybrid implementation. Per-layer analog
/// operations are kernel_size × patches × 2 (no kernel-count factor); the
/// published table prints them to three significant figures, and the
/// headline energies follow that printed column. Exact counts are reported
/// alongside.
HybridEnergyReport hybrid_energy(const ArchTable& arch, const HybridEnergyParams& p);

}  // namespace ocnn
