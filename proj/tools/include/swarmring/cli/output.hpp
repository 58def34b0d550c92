#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmring/control.hpp"
#include "swarmring/sim.hpp"

namespace swarmring::cli {

/// Header-first CSV writer; every row must match the header width.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    void row(const std::vector<double>& values);
    std::size_t columns() const noexcept { return header_.size(); }

private:
    std::filesystem::path path_;
    std::vector<std::string> header_;
    std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// metrics.csv, connectivity.csv, snapshots.csv and positions.csv for one run.
void write_run_files(const std::filesystem::path& dir, const RunRecord& run);

/// metrics.csv and snapshots.csv for a macroscopic run.
void write_macro_files(const std::filesystem::path& dir, const MacroResult& result, const Field& initial,
                       const Field& target);

/// Per-run summary numbers: final and peak errors, connectivity statistics.
nlohmann::json run_summary(const RunRecord& run);

}  // namespace swarmring::cli
