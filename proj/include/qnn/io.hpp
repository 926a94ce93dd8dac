#pragma once

#include <string>
#include <vector>

#include "qnn/experiments.hpp"
#include "qnn/network.hpp"

namespace qnn {

inline constexpr const char* kVersion = "0.1.0";

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Reproducibility record written next to every output file as
// <output>.manifest.json.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::string parameters_json = "{}";
};

void write_manifest(const RunManifest& m, const std::string& output_path);

std::string activity_csv(const ActivityReport& report);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string truth_table_csv(const std::vector<TruthRow>& rows);

// Small python script that plots a sweep CSV next to it.
std::string sweep_plot_script(const std::string& csv_name);

}  // namespace qnn
