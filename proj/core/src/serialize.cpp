#include "ocnn/serialize.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <random>

#include "ocnn/errors.hpp"

namespace ocnn {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json parse(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw IoError("malformed JSON document");
    return doc;
}

void check_version(const json& doc, const char* what) {
    if (!doc.is_object() || !doc.contains("version") || doc["version"] != kFormatVersion) {
        throw IoError(std::string(what) + ": missing or unsupported version field");
    }
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

json schedule_doc(const PhaseSchedule& s) {
    json thetas = json::array();
    for (const PlanarRotation& t : s.rotations()) {
        thetas.push_back(json::array({t.i, t.j, t.theta}));
    }
    return json{{"version", kFormatVersion},
                {"n", s.dim()},
                {"thetas", std::move(thetas)},
                {"signs", s.signs()}};
}

PhaseSchedule schedule_from_doc(const json& doc) {
    check_version(doc, "phase schedule");
    try {
        const int n = doc.at("n").get<int>();
        std::vector<PlanarRotation> thetas;
        for (const json& t : doc.at("thetas")) {
            thetas.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>()});
        }
        std::vector<int> signs = doc.at("signs").get<std::vector<int>>();
        return PhaseSchedule(n, std::move(thetas), std::move(signs));
    } catch (const json::exception& e) {
        throw IoError(std::string("phase schedule: ") + e.what());
    }
}

json matrix_doc(const Mat& m) {
    std::vector<double> entries(m.data(), m.data() + m.size());
    return json{{"version", kFormatVersion},
                {"rows", m.rows()},
                {"cols", m.cols()},
                {"entries", std::move(entries)}};
}

Mat matrix_from_doc(const json& doc, const char* what) {
    check_version(doc, what);
    try {
        const Eigen::Index rows = doc.at("rows").get<Eigen::Index>();
        const Eigen::Index cols = doc.at("cols").get<Eigen::Index>();
        const std::vector<double> entries = doc.at("entries").get<std::vector<double>>();
        if (rows < 1 || cols < 1 ||
            entries.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
            throw IoError(std::string(what) + ": entry count does not match dimensions");
        }
        Mat m(rows, cols);
        std::copy(entries.begin(), entries.end(), m.data());
        return m;
    } catch (const json::exception& e) {
        throw IoError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

std::string schedule_to_json(const PhaseSchedule& s) { return schedule_doc(s).dump(2) + "\n"; }

PhaseSchedule schedule_from_json(const std::string& text) {
    return schedule_from_doc(parse(text));
}

std::string factors_to_json(const KernelFactors& f) {
    json doc{{"version", kFormatVersion},
             {"rows", f.rows},
             {"cols", f.cols},
             {"sigma", std::vector<double>(f.sigma.data(), f.sigma.data() + f.sigma.size())},
             {"u_schedule", schedule_doc(f.u_schedule)},
             {"v_schedule", schedule_doc(f.v_schedule)}};
    return doc.dump(2) + "\n";
}

KernelFactors factors_from_json(const std::string& text) {
    const json doc = parse(text);
    check_version(doc, "kernel factors");
    try {
        const int rows = doc.at("rows").get<int>();
        const int cols = doc.at("cols").get<int>();
        const std::vector<double> sigma = doc.at("sigma").get<std::vector<double>>();
        PhaseSchedule u_schedule = schedule_from_doc(doc.at("u_schedule"));
        PhaseSchedule v_schedule = schedule_from_doc(doc.at("v_schedule"));
        if (u_schedule.dim() != rows || v_schedule.dim() != cols ||
            sigma.size() != static_cast<std::size_t>(std::min(rows, cols))) {
            throw IoError("kernel factors: inconsistent dimensions");
        }
        for (std::size_t i = 0; i + 1 < sigma.size(); ++i) {
            if (sigma[i] < sigma[i + 1]) throw IoError("kernel factors: sigma not sorted");
        }
        for (double s : sigma) {
            if (s < 0.0) throw IoError("kernel factors: negative singular value");
        }
        KernelFactors f{rows,
                        cols,
                        reconstruct_orthogonal(u_schedule).matrix(),
                        Eigen::Map<const Vec>(sigma.data(), static_cast<Eigen::Index>(sigma.size())),
                        reconstruct_orthogonal(v_schedule).matrix(),
                        std::move(u_schedule),
                        std::move(v_schedule)};
        return f;
    } catch (const json::exception& e) {
        throw IoError(std::string("kernel factors: ") + e.what());
    }
}

std::string matrix_to_json(const Mat& m) { return matrix_doc(m).dump(2) + "\n"; }

Mat matrix_from_json(const std::string& text) { return matrix_from_doc(parse(text), "matrix"); }

std::string weights_to_json(const NetworkSpec& net, const std::vector<KernelMatrix>& weights) {
    if (net.layers().size() != weights.size()) {
        throw DimensionMismatch("layer count does not match weight count");
    }
    json layers = json::array();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const LayerSpec& l = net.layers()[i];
        const Mat& m = weights[i].matrix();
        json geometry;
        if (l.kind == LayerKind::conv) {
            geometry = json{{"w", l.geometry.w}, {"k", l.geometry.k}, {"s", l.geometry.s},
                            {"p", l.geometry.p}, {"c", l.geometry.c}, {"d", l.geometry.d}};
        } else {
            geometry = json{{"in_dim", l.fc.in_dim}, {"out_dim", l.fc.out_dim}};
        }
        layers.push_back(json{{"kind", l.kind == LayerKind::conv ? "conv" : "fully_connected"},
                              {"geometry", std::move(geometry)},
                              {"nonlinearity", nonlinearity_name(l.nonlinearity)},
                              {"rows", m.rows()},
                              {"cols", m.cols()},
                              {"entries", std::vector<double>(m.data(), m.data() + m.size())}});
    }
    json doc{{"version", kFormatVersion}, {"layers", std::move(layers)}};
    return doc.dump() + "\n";
}

LoadedNetwork weights_from_json(const std::string& text) {
    const json doc = parse(text);
    check_version(doc, "weight file");
    try {
        std::vector<LayerSpec> specs;
        std::vector<KernelMatrix> weights;
        for (const json& l : doc.at("layers")) {
            LayerSpec spec;
            const std::string kind = l.at("kind").get<std::string>();
            const json& g = l.at("geometry");
            if (kind == "conv") {
                spec.kind = LayerKind::conv;
                spec.geometry = {g.at("w").get<int>(), g.at("k").get<int>(), g.at("s").get<int>(),
                                 g.at("p").get<int>(), g.at("c").get<int>(), g.at("d").get<int>()};
            } else if (kind == "fully_connected") {
                spec.kind = LayerKind::fully_connected;
                spec.fc = {g.at("in_dim").get<int>(), g.at("out_dim").get<int>()};
            } else {
                throw IoError("weight file: unknown layer kind '" + kind + "'");
            }
            spec.nonlinearity = nonlinearity_from_name(l.at("nonlinearity").get<std::string>());
            specs.push_back(spec);

            Mat m = matrix_from_doc(json{{"version", kFormatVersion},
                                         {"rows", l.at("rows")},
                                         {"cols", l.at("cols")},
                                         {"entries", l.at("entries")}},
                                    "weight matrix");
            if (m.rows() != spec.weight_rows() || m.cols() != spec.weight_cols()) {
                throw IoError("weight file: matrix shape does not match layer geometry");
            }
            weights.emplace_back(std::move(m));
        }
        return LoadedNetwork{NetworkSpec(std::move(specs)), std::move(weights)};
    } catch (const json::exception& e) {
        throw IoError(std::string("weight file: ") + e.what());
    }
}

std::string agreement_csv(const std::vector<AgreementRow>& rows) {
    std::string out = "sigma,trial,agreement\n";
    for (const AgreementRow& r : rows) {
        out += fmt("%.10g", r.sigma);
        out += ",";
        out += std::to_string(r.trial);
        out += ",";
        out += fmt("%.10g", r.agreement);
        out += "\n";
    }
    return out;
}

std::string delay_plan_csv(const std::vector<DelayPlanEntry>& plan) {
    std::string out = "layer,dim,kernel,stride,dt_over_1f,dT_over_1f,max_len_over_1f\n";
    for (const DelayPlanEntry& e : plan) {
        out += e.row.name + "," + std::to_string(e.row.dim) + "," + std::to_string(e.row.kernel) +
               "," + (e.row.stride ? std::to_string(*e.row.stride) : std::string("NA")) + "," +
               std::to_string(e.dt) + "," + std::to_string(e.dT) + "," + std::to_string(e.max_len) +
               "\n";
    }
    return out;
}

std::string repatch_trace_json(const RepatchSimResult& result) {
    json patches = json::array();
    for (int t = 0; t < result.patches.size(); ++t) {
        const auto row = result.patches.matrix().row(t);
        patches.push_back(std::vector<double>(row.begin(), row.end()));
    }
    json doc{{"version", kFormatVersion},
             {"period_slots", result.schedule.period_slots},
             {"valid_times", result.schedule.valid_times},
             {"invalid_times", result.schedule.invalid_times},
             {"patches", std::move(patches)}};
    return doc.dump(2) + "\n";
}

std::string optical_report_csv(const OpticalEnergyReport& r) {
    std::string out = "layer,units,patches,energy_j\n";
    for (const OpticalLayerRow& row : r.rows) {
        out += row.name + "," + std::to_string(row.units) + "," + std::to_string(row.patches) +
               "," + fmt("%.10g", row.energy_j) + "\n";
    }
    out += "TOTAL,,," + fmt("%.10g", r.total_j) + "\n";
    return out;
}

std::string optical_report_json(const OpticalEnergyReport& r) {
    json rows = json::array();
    for (const OpticalLayerRow& row : r.rows) {
        rows.push_back(json{{"layer", row.name},
                            {"units", row.units},
                            {"patches", row.patches},
                            {"energy_j", row.energy_j},
                            {"energy_exact_j", row.energy_exact_j}});
    }
    json doc{{"version", kFormatVersion},
             {"model", "optical"},
             {"rows", std::move(rows)},
             {"e_waveguide_j", r.e_waveguide_j},
             {"e_waveguide_table_j", r.e_waveguide_table_j},
             {"total_j", r.total_j},
             {"total_exact_j", r.total_exact_j},
             {"eq1_coefficient", r.eq1_coefficient},
             {"eq1_power_w", r.eq1_power_w}};
    return doc.dump(2) + "\n";
}

std::string electronic_report_csv(const ElectronicEnergyReport& r) {
    std::string out = "layer,kernel_size,patches,kernels,flops\n";
    for (const ElectronicLayerRow& row : r.rows) {
        out += row.name + "," + std::to_string(row.kernel_size) + "," +
               std::to_string(row.patches) + "," + std::to_string(row.kernels) + "," +
               std::to_string(row.flops) + "\n";
    }
    out += "TOTAL,,,," + std::to_string(r.total_flops) + "\n";
    return out;
}

std::string electronic_report_json(const ElectronicEnergyReport& r, const OpticalTiming* timing) {
    json rows = json::array();
    for (const ElectronicLayerRow& row : r.rows) {
        rows.push_back(json{{"layer", row.name},
                            {"kernel_size", row.kernel_size},
                            {"patches", row.patches},
                            {"kernels", row.kernels},
                            {"flops", row.flops}});
    }
    json doc{{"version", kFormatVersion},
             {"model", "electronic"},
             {"rows", std::move(rows)},
             {"total_flops", r.total_flops},
             {"energy_j", r.energy_j},
             {"time_per_image_s", r.time_per_image_s}};
    if (timing != nullptr) {
        doc["optical_time_s"] = timing->time_s;
        doc["optical_speedup"] = timing->speedup_vs_electronic;
    }
    return doc.dump(2) + "\n";
}

std::string hybrid_report_csv(const HybridEnergyReport& r) {
    std::string out = "layer,kernel_size,patches,analog_ops\n";
    for (const HybridLayerRow& row : r.rows) {
        out += row.name + "," + std::to_string(row.kernel_size) + "," +
               std::to_string(row.patches) + "," + fmt("%.10g", row.ops_table) + "\n";
    }
    out += "TOTAL,,," + fmt("%.10g", r.total_ops_table) + "\n";
    return out;
}

std::string hybrid_report_json(const HybridEnergyReport& r) {
    json rows = json::array();
    for (const HybridLayerRow& row : r.rows) {
        rows.push_back(json{{"layer", row.name},
                            {"kernel_size", row.kernel_size},
                            {"patches", row.patches},
                            {"analog_ops", row.ops_table},
                            {"analog_ops_exact", row.ops_exact}});
    }
    json doc{{"version", kFormatVersion},
             {"model", "hybrid"},
             {"rows", std::move(rows)},
             {"total_analog_ops", r.total_ops_table},
             {"total_analog_ops_exact", r.total_ops_exact},
             {"analog_energy_j", r.analog_energy_j},
             {"analog_energy_exact_j", r.analog_energy_exact_j},
             {"total_patches", r.total_patches},
             {"laser_energy_j", r.laser_energy_j},
             {"monolithic_energy_j", r.monolithic_energy_j}};
    return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("read failure on " + path.string());
    return text;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::random_device rd;
    const fs::path tmp =
        dir / (path.filename().string() + ".tmp." + std::to_string(rd()) + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failure on " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

}  // namespace ocnn
