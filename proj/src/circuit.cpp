#include "qcp/circuit.hpp"

#include <nlohmann/json.hpp>

namespace qcp {

using json = nlohmann::json;

void ParametrizedCircuit::add_rotation(const PauliString& generator,
                                       int param_index, double scale) {
  gates.push_back(PauliRotation{generator, param_index, scale});
}

void ParametrizedCircuit::add_clifford(CliffordKind kind, int site0,
                                       int site1) {
  gates.push_back(CliffordGate{kind, site0, site1});
}

void ParametrizedCircuit::validate() const {
  if (reference_params.size() != n_params) {
    throw std::invalid_argument(
        "circuit: reference_params length does not match n_params");
  }
  for (const Gate& g : gates) {
    if (const auto* c = std::get_if<CliffordGate>(&g)) {
      if (c->site0 < 0 || c->site0 >= n_qubits) {
        throw std::invalid_argument("circuit: clifford site out of range");
      }
      if (c->arity() == 2 &&
          (c->site1 < 0 || c->site1 >= n_qubits || c->site1 == c->site0)) {
        throw std::invalid_argument("circuit: invalid CNOT sites");
      }
    } else {
      const auto& r = std::get<PauliRotation>(g);
      if (r.generator.n_qubits() != n_qubits) {
        throw std::invalid_argument("circuit: generator size mismatch");
      }
      const int w = r.generator.weight();
      if (w < 1 || w > 2) {
        throw std::invalid_argument("circuit: generator weight must be 1 or 2");
      }
      if (r.param_index < 0 || r.param_index >= n_params) {
        throw std::invalid_argument("circuit: parameter index out of range");
      }
    }
  }
}

static const char* clifford_name(CliffordKind k) {
  switch (k) {
    case CliffordKind::H: return "H";
    case CliffordKind::S: return "S";
    case CliffordKind::CNOT: return "CNOT";
  }
  return "?";
}

static CliffordKind clifford_from_name(const std::string& s) {
  if (s == "H") return CliffordKind::H;
  if (s == "S") return CliffordKind::S;
  if (s == "CNOT") return CliffordKind::CNOT;
  throw std::invalid_argument("unknown clifford kind: " + s);
}

json ParametrizedCircuit::to_json() const {
  json j;
  j["n_qubits"] = n_qubits;
  j["n_params"] = n_params;
  j["reference_params"] = std::vector<double>(
      reference_params.data(), reference_params.data() + reference_params.size());
  json gs = json::array();
  for (const Gate& g : gates) {
    if (const auto* c = std::get_if<CliffordGate>(&g)) {
      json e;
      e["type"] = "clifford";
      e["kind"] = clifford_name(c->kind);
      e["sites"] = c->arity() == 2 ? std::vector<int>{c->site0, c->site1}
                                   : std::vector<int>{c->site0};
      gs.push_back(e);
    } else {
      const auto& r = std::get<PauliRotation>(g);
      json e;
      e["type"] = "rotation";
      e["generator"] = r.generator.str();
      e["param"] = r.param_index;
      e["scale"] = r.scale;
      gs.push_back(e);
    }
  }
  j["gates"] = gs;
  return j;
}

ParametrizedCircuit ParametrizedCircuit::from_json(const json& j) {
  ParametrizedCircuit c;
  c.n_qubits = j.at("n_qubits").get<int>();
  c.n_params = j.at("n_params").get<int>();
  auto ref = j.at("reference_params").get<std::vector<double>>();
  c.reference_params = Eigen::Map<const Eigen::VectorXd>(
      ref.data(), static_cast<Eigen::Index>(ref.size()));
  for (const json& e : j.at("gates")) {
    const std::string type = e.at("type").get<std::string>();
    if (type == "clifford") {
      auto sites = e.at("sites").get<std::vector<int>>();
      const CliffordKind kind = clifford_from_name(e.at("kind"));
      c.add_clifford(kind, sites.at(0), sites.size() > 1 ? sites.at(1) : -1);
    } else if (type == "rotation") {
      c.add_rotation(PauliString::parse(e.at("generator").get<std::string>()),
                     e.at("param").get<int>(), e.at("scale").get<double>());
    } else {
      throw std::invalid_argument("unknown gate type: " + type);
    }
  }
  c.validate();
  return c;
}

}  // namespace qcp
