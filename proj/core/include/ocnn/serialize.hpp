#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ocnn/cnn.hpp"
#include "ocnn/delayline.hpp"
#include "ocnn/energy.hpp"
#include "ocnn/photonic.hpp"
#include "ocnn/reck.hpp"
#include "ocnn/sweep.hpp"

namespace ocnn {

// All documents are versioned JSON ("version": 1) or LF-terminated CSV with
// dot decimal separators. Numbers serialize losslessly (shortest
// round-trip form, up to 17 significant digits).

std::string schedule_to_json(const PhaseSchedule& s);
PhaseSchedule schedule_from_json(const std::string& text);

std::string factors_to_json(const KernelFactors& f);
/// Rebuilds the orthogonal factors from the embedded schedules.
KernelFactors factors_from_json(const std::string& text);

std::string matrix_to_json(const Mat& m);
Mat matrix_from_json(const std::string& text);

std::string weights_to_json(const NetworkSpec& net, const std::vector<KernelMatrix>& weights);

struct LoadedNetwork {
    NetworkSpec net;
    std::vector<KernelMatrix> weights;
};
LoadedNetwork weights_from_json(const std::string& text);

/// Header "sigma,trial,agreement"; values with 10 significant digits.
std::string agreement_csv(const std::vector<AgreementRow>& rows);

/// Header "layer,dim,kernel,stride,dt_over_1f,dT_over_1f,max_len_over_1f";
/// a missing stride prints as NA.
std::string delay_plan_csv(const std::vector<DelayPlanEntry>& plan);

std::string repatch_trace_json(const RepatchSimResult& result);

std::string optical_report_csv(const OpticalEnergyReport& r);
std::string optical_report_json(const OpticalEnergyReport& r);
std::string electronic_report_csv(const ElectronicEnergyReport& r);
std::string electronic_report_json(const ElectronicEnergyReport& r, const OpticalTiming* timing);
std::string hybrid_report_csv(const HybridEnergyReport& r);
std::string hybrid_report_json(const HybridEnergyReport& r);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a temp file in the target directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace ocnn
