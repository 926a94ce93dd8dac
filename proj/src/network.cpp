#include "qnn/network.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "qnn/stats.hpp"

namespace qnn {

using nlohmann::json;

int NetworkSpec::index_of(const std::string& id) const {
  for (size_t i = 0; i < neurons.size(); ++i)
    if (neurons[i].id == id) return static_cast<int>(i);
  return -1;
}

KinkSchedule default_active_schedule(const LatticeConfig& cfg) {
  KinkSchedule s;
  for (int i = 0; i < 6; ++i)
    s.centers.push_back((2 * i + 1) * cfg.total_time / 12.0);
  return s;
}

Path build_input_path(const NeuronSpec& spec, const LatticeConfig& cfg) {
  switch (spec.kind) {
    case NeuronKind::InputPassive:
      return Path(cfg.n_slices, 1.0);
    case NeuronKind::InputActive:
    case NeuronKind::InputGraded: {
      const KinkSchedule& s =
          spec.schedule.centers.empty() ? default_active_schedule(cfg) : spec.schedule;
      Path base = analytic_kink_path(s, cfg);
      if (spec.kind == NeuronKind::InputGraded)
        return graded_path(spec.brightness, base);
      return base;
    }
    case NeuronKind::Simulated:
      break;
  }
  throw std::invalid_argument("build_input_path: neuron " + spec.id +
                              " is simulated, not an input");
}

Path reference_activity_path(const LatticeConfig& cfg) {
  return analytic_kink_path(default_active_schedule(cfg), cfg, false);
}

Path graded_path(double b, const Path& base) {
  if (b < 0.0 || b > 1.0)
    throw std::invalid_argument("brightness outside [0,1]");
  double rb = std::sqrt(b);
  Path out(base.size());
  for (size_t j = 0; j < base.size(); ++j)
    out[j] = std::sqrt(rb * base[j] * base[j] - rb + 1.0);
  return out;
}

double potential_integral(const Path& path, const LatticeConfig& cfg) {
  double sum = 0.0;
  for (double phi : path) sum += self_potential(phi, cfg.lambda);
  return cfg.dtau() * sum;
}

std::pair<double, double> activity(const std::vector<SystemState>& samples,
                                   int neuron, const Path& reference,
                                   const LatticeConfig& cfg) {
  if (samples.empty()) throw std::invalid_argument("activity: no samples");
  double denom = potential_integral(reference, cfg);
  if (denom <= 0.0)
    throw std::invalid_argument("activity: reference path has zero potential energy");
  std::vector<double> ratios;
  ratios.reserve(samples.size());
  for (const SystemState& s : samples)
    ratios.push_back(potential_integral(s.paths[neuron], cfg) / denom);
  return {mean(ratios), std_error(ratios)};
}

std::vector<std::string> validate(const NetworkSpec& net) {
  std::vector<std::string> out;
  const LatticeConfig& cfg = net.lattice;
  if (cfg.n_slices < 8) out.push_back("lattice: n_slices must be >= 8");
  if (!(cfg.total_time > 0.0)) out.push_back("lattice: total_time must be > 0");
  if (!(cfg.lambda > 0.0)) out.push_back("lattice: lambda must be > 0");

  std::set<std::string> ids;
  for (const NeuronSpec& n : net.neurons) {
    if (n.id.empty()) out.push_back("neuron with empty id");
    if (!ids.insert(n.id).second) out.push_back("duplicate neuron id " + n.id);
    if (n.kind == NeuronKind::InputGraded && (n.brightness < 0.0 || n.brightness > 1.0))
      out.push_back("neuron " + n.id + ": brightness outside [0,1]");
    if ((n.kind == NeuronKind::InputActive || n.kind == NeuronKind::InputGraded) &&
        !n.schedule.centers.empty()) {
      try {
        n.schedule.check(cfg);
      } catch (const std::exception& e) {
        out.push_back("neuron " + n.id + ": " + e.what());
      }
    }
  }

  int n_neurons = static_cast<int>(net.neurons.size());
  for (size_t ci = 0; ci < net.connections.size(); ++ci) {
    const Coupling& c = net.connections[ci];
    std::string tag = "connection " + std::to_string(ci);
    if (c.from < 0 || c.from >= n_neurons || c.to < 0 || c.to >= n_neurons) {
      out.push_back(tag + ": neuron index out of range");
      continue;
    }
    if (c.from == c.to) out.push_back(tag + ": self-coupling");
    if (c.epsilon < 0.0) out.push_back(tag + ": negative epsilon");
    if (c.type == CouplingType::Excitatory &&
        net.neurons[c.to].kind != NeuronKind::Simulated)
      out.push_back(tag + ": excitatory target " + net.neurons[c.to].id +
                    " is a fixed input");
    if (c.type == CouplingType::Inhibitory && c.from > c.to)
      out.push_back(tag + ": inhibitory pair not in canonical order");
  }
  return out;
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) { known = true; break; }
    if (!known)
      throw std::invalid_argument("unknown key \"" + it.key() + "\" in " + where);
  }
}

}  // namespace

NetworkSpec network_from_json(const std::string& text) {
  json doc = json::parse(text);
  reject_unknown_keys(doc, {"lattice", "neurons", "connections"}, "network");

  NetworkSpec net;
  const json& lat = doc.at("lattice");
  reject_unknown_keys(lat, {"n_slices", "total_time", "lambda"}, "lattice");
  net.lattice.n_slices = lat.at("n_slices").get<int>();
  net.lattice.total_time = lat.at("total_time").get<double>();
  net.lattice.lambda = lat.at("lambda").get<double>();

  for (const json& jn : doc.at("neurons")) {
    reject_unknown_keys(jn, {"id", "kind", "brightness", "kink_centers"},
                        "neuron");
    NeuronSpec n;
    n.id = jn.at("id").get<std::string>();
    std::string kind = jn.at("kind").get<std::string>();
    if (kind == "simulated") n.kind = NeuronKind::Simulated;
    else if (kind == "active") n.kind = NeuronKind::InputActive;
    else if (kind == "passive") n.kind = NeuronKind::InputPassive;
    else if (kind == "graded") n.kind = NeuronKind::InputGraded;
    else throw std::invalid_argument("neuron " + n.id + ": unknown kind \"" + kind + "\"");
    if (jn.contains("brightness")) {
      if (n.kind != NeuronKind::InputGraded)
        throw std::invalid_argument("neuron " + n.id + ": brightness only valid for graded");
      n.brightness = jn.at("brightness").get<double>();
    } else if (n.kind == NeuronKind::InputGraded) {
      throw std::invalid_argument("neuron " + n.id + ": graded input needs brightness");
    }
    if (jn.contains("kink_centers")) {
      if (n.kind != NeuronKind::InputActive && n.kind != NeuronKind::InputGraded)
        throw std::invalid_argument("neuron " + n.id + ": kink_centers only valid for inputs");
      n.schedule.centers = jn.at("kink_centers").get<std::vector<double>>();
    }
    net.neurons.push_back(std::move(n));
  }

  for (const json& jc : doc.at("connections")) {
    reject_unknown_keys(jc, {"type", "from", "to", "epsilon"}, "connection");
    Coupling c;
    std::string type = jc.at("type").get<std::string>();
    if (type == "exc") c.type = CouplingType::Excitatory;
    else if (type == "inh") c.type = CouplingType::Inhibitory;
    else throw std::invalid_argument("connection: unknown type \"" + type + "\"");
    std::string from = jc.at("from").get<std::string>();
    std::string to = jc.at("to").get<std::string>();
    c.from = net.index_of(from);
    c.to = net.index_of(to);
    if (c.from < 0) throw std::invalid_argument("connection references unknown id " + from);
    if (c.to < 0) throw std::invalid_argument("connection references unknown id " + to);
    if (c.type == CouplingType::Inhibitory && c.from > c.to) std::swap(c.from, c.to);
    c.epsilon = jc.at("epsilon").get<double>();
    net.connections.push_back(c);
  }
  return net;
}

std::string network_to_json(const NetworkSpec& net) {
  json doc;
  doc["lattice"] = {{"n_slices", net.lattice.n_slices},
                    {"total_time", net.lattice.total_time},
                    {"lambda", net.lattice.lambda}};
  doc["neurons"] = json::array();
  for (const NeuronSpec& n : net.neurons) {
    json jn;
    jn["id"] = n.id;
    switch (n.kind) {
      case NeuronKind::Simulated: jn["kind"] = "simulated"; break;
      case NeuronKind::InputActive: jn["kind"] = "active"; break;
      case NeuronKind::InputPassive: jn["kind"] = "passive"; break;
      case NeuronKind::InputGraded:
        jn["kind"] = "graded";
        jn["brightness"] = n.brightness;
        break;
    }
    if (!n.schedule.centers.empty()) jn["kink_centers"] = n.schedule.centers;
    doc["neurons"].push_back(jn);
  }
  doc["connections"] = json::array();
  for (const Coupling& c : net.connections) {
    doc["connections"].push_back(
        {{"type", c.type == CouplingType::Excitatory ? "exc" : "inh"},
         {"from", net.neurons[c.from].id},
         {"to", net.neurons[c.to].id},
         {"epsilon", c.epsilon}});
  }
  return doc.dump(2);
}

}  // namespace qnn
