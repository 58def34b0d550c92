#include "swarmring/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "swarmring/errors.hpp"

namespace swarmring::cli {

using nlohmann::json;

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), header_(std::move(header)), out_(path) {
    if (!out_) throw InvalidArgument("cannot write " + path.string());
    out_ << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t c = 0; c < header_.size(); ++c) out_ << (c ? "," : "") << header_[c];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != header_.size()) {
        throw InvalidArgument(path_.string() + ": row has " + std::to_string(values.size()) + " columns, header has " +
                              std::to_string(header_.size()));
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
        if (!std::isfinite(values[c])) throw InvalidArgument(path_.string() + ": non-finite value in " + header_[c]);
        out_ << (c ? "," : "") << values[c];
    }
    out_ << '\n';
}

void write_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

void write_run_files(const std::filesystem::path& dir, const RunRecord& run) {
    std::filesystem::create_directories(dir);

    const ErrorSeries density = run.density_error();
    const bool est = run.has_estimator();
    const ErrorSeries estimation = est ? run.estimation_error() : ErrorSeries{};
    {
        std::vector<std::string> header{"t", "density_error_raw", "density_error_normalized", "target_mean",
                                        "seam_jump"};
        if (est) {
            header.emplace_back("estimation_error_raw");
            header.emplace_back("estimation_error_normalized");
        }
        CsvWriter csv(dir / "metrics.csv", header);
        for (std::size_t s = 0; s < density.times.size(); ++s) {
            std::vector<double> r{density.times[s], density.raw[s], density.normalized[s], run.target_mean[s],
                                  run.seam_jump[s]};
            if (est) {
                r.push_back(estimation.raw[s]);
                r.push_back(estimation.normalized[s]);
            }
            csv.row(r);
        }
    }
    {
        CsvWriter csv(dir / "connectivity.csv", {"step", "t", "connected"});
        for (std::size_t n = 0; n < run.step_times.size(); ++n) {
            csv.row({static_cast<double>(n), run.step_times[n], static_cast<double>(run.connected[n])});
        }
    }
    {
        std::vector<std::string> header{"t", "x", "density", "target"};
        const bool with_est = !run.snapshots.empty() && run.snapshots.front().estimate_mean.has_value();
        if (with_est) {
            header.emplace_back("estimate_mean");
            header.emplace_back("estimate_min");
            header.emplace_back("estimate_max");
        }
        CsvWriter csv(dir / "snapshots.csv", header);
        for (const Snapshot& snap : run.snapshots) {
            const Grid& g = snap.density.grid();
            for (std::size_t k = 0; k < g.size(); ++k) {
                std::vector<double> r{snap.t, g.point(k), snap.density[k], snap.target[k]};
                if (with_est) {
                    r.push_back((*snap.estimate_mean)[k]);
                    r.push_back((*snap.estimate_min)[k]);
                    r.push_back((*snap.estimate_max)[k]);
                }
                csv.row(r);
            }
        }
    }
    {
        CsvWriter csv(dir / "positions.csv", {"t", "agent", "x", "u"});
        for (std::size_t s = 0; s < run.times.size(); ++s) {
            for (std::size_t i = 0; i < run.positions[s].size(); ++i) {
                csv.row({run.times[s], static_cast<double>(i), run.positions[s][i], run.controls[s][i]});
            }
        }
    }
}

void write_macro_files(const std::filesystem::path& dir, const MacroResult& result, const Field& initial,
                       const Field& target) {
    std::filesystem::create_directories(dir);
    {
        CsvWriter csv(dir / "metrics.csv", {"t", "error_norm", "mass"});
        for (std::size_t s = 0; s < result.times.size(); ++s) {
            csv.row({result.times[s], result.error_norms[s], result.mass[s]});
        }
    }
    CsvWriter csv(dir / "snapshots.csv", {"x", "initial", "final", "target"});
    const Grid& g = initial.grid();
    for (std::size_t k = 0; k < g.size(); ++k) {
        csv.row({g.point(k), initial[k], result.final_density[k], target[k]});
    }
}

json run_summary(const RunRecord& run) {
    json j;
    j["samples"] = run.times.size();
    j["steps"] = run.step_times.size();
    if (!run.times.empty()) {
        const ErrorSeries d = run.density_error();
        j["final_time"] = d.times.back();
        j["initial_density_error_raw"] = d.raw.front();
        j["final_density_error_raw"] = d.raw.back();
        j["final_density_error_normalized"] = d.normalized.back();
        j["max_density_error_raw"] = *std::max_element(d.raw.begin(), d.raw.end());
        j["max_seam_jump"] = *std::max_element(run.seam_jump.begin(), run.seam_jump.end());
        if (run.has_estimator()) {
            const ErrorSeries e = run.estimation_error();
            j["final_estimation_error_raw"] = e.raw.back();
            j["final_estimation_error_normalized"] = e.normalized.back();
        }
    }
    j["disconnected_steps"] = run.disconnected_steps();
    j["disconnected_fraction"] = run.disconnected_fraction();
    j["connected_fraction"] = run.step_times.empty() ? 1.0 : 1.0 - run.disconnected_fraction();
    return j;
}

}  // namespace swarmring::cli
