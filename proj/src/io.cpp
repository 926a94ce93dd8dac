#include "qnn/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qnn {

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

void write_manifest(const RunManifest& m, const std::string& output_path) {
  nlohmann::json doc;
  doc["command"] = m.command;
  doc["arguments"] = m.arguments;
  doc["inputs"] = m.inputs;
  doc["outputs"] = m.outputs;
  doc["seed"] = m.seed;
  doc["parameters"] = nlohmann::json::parse(m.parameters_json);
  doc["version"] = kVersion;
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  doc["created"] = stamp;
  write_text_file(output_path + ".manifest.json", doc.dump(2) + "\n");
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string activity_csv(const ActivityReport& report) {
  std::string out = "neuron_id,activity,std_error,n_samples\n";
  for (const ActivityEntry& e : report.entries)
    out += e.neuron_id + "," + fmt(e.activity) + "," + fmt(e.std_error) + "," +
           std::to_string(e.n_samples) + "\n";
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "k,neuron_id,activity,std_error,n_samples\n";
  for (const SweepRow& r : rows)
    out += fmt(r.k) + "," + r.neuron_id + "," + fmt(r.activity) + "," +
           fmt(r.std_error) + "," + std::to_string(r.n_samples) + "\n";
  return out;
}

std::string truth_table_csv(const std::vector<TruthRow>& rows) {
  std::string out = "case,output_activity,std_error,verdict\n";
  for (const TruthRow& r : rows)
    out += r.case_name + "," + fmt(r.output_activity) + "," + fmt(r.std_error) +
           "," + r.verdict + "\n";
  return out;
}

std::string sweep_plot_script(const std::string& csv_name) {
  std::string s;
  s += "#!/usr/bin/env python3\n";
  s += "import csv, collections\n";
  s += "import matplotlib.pyplot as plt\n\n";
  s += "series = collections.defaultdict(lambda: ([], [], []))\n";
  s += "with open(" + std::string("\"") + csv_name + "\") as f:\n";
  s += "    for row in csv.DictReader(f):\n";
  s += "        xs, ys, es = series[row[\"neuron_id\"]]\n";
  s += "        xs.append(float(row[\"k\"]))\n";
  s += "        ys.append(float(row[\"activity\"]))\n";
  s += "        es.append(float(row[\"std_error\"]))\n";
  s += "for name, (xs, ys, es) in sorted(series.items()):\n";
  s += "    plt.errorbar(xs, ys, yerr=es, marker=\"o\", label=name)\n";
  s += "plt.xlabel(\"k\")\nplt.ylabel(\"activity\")\nplt.legend()\n";
  s += "plt.savefig(\"" + csv_name + ".png\", dpi=150)\n";
  return s;
}

}  // namespace qnn
