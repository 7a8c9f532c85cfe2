#pragma once

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>
#include <variant>
#include <vector>

#include "qcp/pauli.hpp"

namespace qcp {

enum class CliffordKind { H, S, CNOT };

struct CliffordGate {
  CliffordKind kind;
  int site0 = 0;
  int site1 = -1;  // second site for CNOT (target), -1 otherwise

  int arity() const { return kind == CliffordKind::CNOT ? 2 : 1; }
};

/// Rotation exp(-i angle/2 * generator) with angle = scale * params[param].
struct PauliRotation {
  PauliString generator;
  int param_index = 0;
  double scale = 1.0;
};

using Gate = std::variant<CliffordGate, PauliRotation>;

struct ParametrizedCircuit {
  int n_qubits = 0;
  int n_params = 0;
  std::vector<Gate> gates;
  Eigen::VectorXd reference_params;

  void add_rotation(const PauliString& generator, int param_index,
                    double scale = 1.0);
  void add_clifford(CliffordKind kind, int site0, int site1 = -1);

  /// Checks site/parameter index ranges and reference_params length.
  void validate() const;

  nlohmann::json to_json() const;
  static ParametrizedCircuit from_json(const nlohmann::json& j);
};

}  // namespace qcp
