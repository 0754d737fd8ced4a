#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "nyqenv/experiments.hpp"

namespace nyqenv {

// Human-readable table, 12 significant digits.
void print_spectrum(std::ostream& out, const SpectrumReport& report);
void print_predict(std::ostream& out, const PredictReport& report);
void print_sweep(std::ostream& out, const SweepReport& report);
void print_wkb(std::ostream& out, const WkbReport& report);
void print_figure(std::ostream& out, const FigureDataset& dataset);

// CSV bodies: header row, 17 significant digits, LF endings.
void write_spectrum_csv(std::ostream& out, const SpectrumReport& report);
void write_predict_csv(std::ostream& out, const PredictReport& report);
void write_sweep_csv(std::ostream& out, const SweepReport& report);

/**
 * Metadata block. "generated_at" is the only field that varies between
 * identical runs; it honours SOURCE_DATE_EPOCH when that is set.
 */
nlohmann::json metadata_json(const RunMetadata& metadata);

nlohmann::json to_json(const SpectrumReport& report);
nlohmann::json to_json(const FigureDataset& dataset);
nlohmann::json to_json(const PredictReport& report);
nlohmann::json to_json(const SweepReport& report);
nlohmann::json to_json(const WkbReport& report);

/**
 * Writes a report to `path`. CSV output puts the metadata in a sidecar
 * "<stem>.meta.json"; JSON output is a single document. Figure datasets treat
 * `path` as a directory. Returns the files written.
 */
std::vector<std::filesystem::path> write_report(const SpectrumReport& report, OutputFormat format,
                                                const std::filesystem::path& path);
std::vector<std::filesystem::path> write_report(const PredictReport& report, OutputFormat format,
                                                const std::filesystem::path& path);
std::vector<std::filesystem::path> write_report(const SweepReport& report, OutputFormat format,
                                                const std::filesystem::path& path);
std::vector<std::filesystem::path> write_report(const WkbReport& report, const std::filesystem::path& path);
std::vector<std::filesystem::path> write_report(const FigureDataset& dataset, OutputFormat format,
                                                const std::filesystem::path& directory);

}  // namespace nyqenv
