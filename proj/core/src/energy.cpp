#include "ocnn/energy.hpp"

#include <cmath>

#include "ocnn/errors.hpp"

namespace ocnn {

ArchTable alexnet_arch_table() {
    return {
        {"conv1", 11 * 11 * 3, 55 * 55, 96},
        {"conv2", 5 * 5 * 96, 27 * 27, 256},
        {"conv3", 3 * 3 * 256, 13 * 13, 384},
        {"conv4", 3 * 3 * 384, 13 * 13, 384},
        {"conv5", 3 * 3 * 384, 13 * 13, 256},
        {"fc1", 13 * 13 * 256, 1, 4096},
        {"fc2", 1 * 1 * 4096, 1, 4096},
        {"fc3", 1 * 1 * 4096, 1, 1000},
    };
}

double round_sig(double x, int digits) {
    if (x == 0.0) return 0.0;
    const double mag = std::floor(std::log10(std::abs(x)));
    const double scale = std::pow(10.0, digits - 1 - mag);
    return std::round(x * scale) / scale;
}

namespace {
void check_arch(const ArchTable& arch) {
    if (arch.empty()) throw ValidationError("empty architecture table");
    for (const ArchLayer& l : arch) {
        if (l.kernel_size < 1 || l.num_patches < 1 || l.num_units < 1) {
            throw ValidationError("architecture row '" + l.name + "' out of range");
        }
    }
}
}  // namespace

OpticalEnergyReport optical_energy(const ArchTable& arch, const OpticalEnergyParams& p) {
    check_arch(arch);
    if (!(p.p0_w >= 0.0) || !(p.f_hz > 0.0) || !(p.amplifier_wall_plug > 0.0) ||
        p.amplifier_wall_plug > 1.0 || !(p.pulses_per_waveguide > 0.0)) {
        throw ValidationError("optical energy parameters out of range");
    }

    OpticalEnergyReport report;
    report.e_waveguide_j = p.pulses_per_waveguide * (1.0 / p.amplifier_wall_plug) * p.p0_w / p.f_hz;
    report.e_waveguide_table_j = round_sig(report.e_waveguide_j, 1);

    double unit_patch_sum = 0.0;
    for (const ArchLayer& l : arch) {
        OpticalLayerRow row;
        row.name = l.name;
        row.units = l.num_units;
        row.patches = l.num_patches;
        const double count = static_cast<double>(l.num_units) * static_cast<double>(l.num_patches);
        row.energy_j = count * report.e_waveguide_table_j;
        row.energy_exact_j = count * report.e_waveguide_j;
        report.total_j += row.energy_j;
        report.total_exact_j += row.energy_exact_j;
        unit_patch_sum += count;
        report.rows.push_back(std::move(row));
    }

    // total_exact = Σ(units·patches) · pulses · (1/η) · P0/f = coeff · Δt · P0
    report.eq1_coefficient = unit_patch_sum * p.pulses_per_waveguide / p.amplifier_wall_plug;
    report.eq1_power_w = report.eq1_coefficient * (1.0 / p.f_hz) * p.p0_w;
    return report;
}

ElectronicEnergyReport electronic_energy(const ArchTable& arch, double rate_flops_per_s,
                                         double power_w) {
    check_arch(arch);
    if (!(rate_flops_per_s > 0.0) || !(power_w >= 0.0)) {
        throw ValidationError("electronic energy parameters out of range");
    }

    ElectronicEnergyReport report;
    for (const ArchLayer& l : arch) {
        ElectronicLayerRow row{l.name, l.kernel_size, l.num_patches, l.num_units,
                               l.kernel_size * l.num_patches * l.num_units * 2};
        report.total_flops += row.flops;
        report.rows.push_back(std::move(row));
    }
    report.time_per_image_s = static_cast<double>(report.total_flops) / rate_flops_per_s;
    report.energy_j = report.time_per_image_s * power_w;
    return report;
}

OpticalTiming optical_time(std::int64_t first_layer_patches, double f_hz,
                           double electronic_time_s) {
    if (first_layer_patches < 1 || !(f_hz > 0.0)) {
        throw ValidationError("optical timing parameters out of range");
    }
    OpticalTiming t;
    t.time_s = static_cast<double>(first_layer_patches) / f_hz;
    t.speedup_vs_electronic = electronic_time_s > 0.0 ? electronic_time_s / t.time_s : 0.0;
    return t;
}

double analog_memory_energy_per_sample(double capacitance_f, double voltage_v, int num_caps) {
    return capacitance_f * voltage_v * voltage_v * num_caps;
}

HybridEnergyReport hybrid_energy(const ArchTable& arch, const HybridEnergyParams& p) {
    check_arch(arch);
    if (!(p.tia_j_per_sample >= 0.0) || !(p.modulator_driver_j_per_sample >= 0.0) ||
        !(p.analog_memory_j_per_sample >= 0.0) || !(p.laser_power_w >= 0.0) ||
        !(p.modulation_hz > 0.0) || !(p.monolithic_j_per_sample >= 0.0)) {
        throw ValidationError("hybrid energy parameters out of range");
    }

    HybridEnergyReport report;
    for (const ArchLayer& l : arch) {
        HybridLayerRow row;
        row.name = l.name;
        row.kernel_size = l.kernel_size;
        row.patches = l.num_patches;
        row.ops_exact = l.kernel_size * l.num_patches * 2;
        // The published table prints (kernel_size × patches) to three
        // significant figures and doubles it.
        row.ops_table = round_sig(static_cast<double>(l.kernel_size * l.num_patches), 3) * 2.0;
        report.total_ops_exact += row.ops_exact;
        report.total_ops_table += row.ops_table;
        report.total_patches += l.num_patches;
        report.rows.push_back(std::move(row));
    }

    const double per_sample =
        p.tia_j_per_sample + p.modulator_driver_j_per_sample + p.analog_memory_j_per_sample;
    report.analog_energy_j = report.total_ops_table * per_sample;
    report.analog_energy_exact_j = static_cast<double>(report.total_ops_exact) * per_sample;
    report.laser_energy_j =
        p.laser_power_w * static_cast<double>(report.total_patches) / p.modulation_hz;
    report.monolithic_energy_j = report.total_ops_table * p.monolithic_j_per_sample;
    return report;
}

}  // namespace ocnn
