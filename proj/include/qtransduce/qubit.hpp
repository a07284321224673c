#pragma once

#include <string>
#include <vector>

namespace qtr {

struct QubitFidelity {
  double fidelity = 0.0;
  std::vector<std::string> warnings;  // set outside |sqrt(eta) - 1| << 1, eta N << 1
};

/// Bloch-sphere averaged fidelity of a photonic qubit sent through the upper sideband:
///   F_q = 1 - (5/3) eta N + (2/3)(sqrt(eta) - 1) + (1/6)(sqrt(eta) - 1)^2
/// Throws DomainError for negative eta or N.
QubitFidelity qubit_fidelity(double eta_plus, double n_plus);

}  // namespace qtr
