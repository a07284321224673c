#include "qtransduce/qubit.hpp"

#include <cmath>

#include "qtransduce/errors.hpp"

namespace qtr {

QubitFidelity qubit_fidelity(double eta_plus, double n_plus) {
  if (!(eta_plus >= 0.0) || !(n_plus >= 0.0)) throw DomainError("qubit fidelity needs eta >= 0 and N >= 0");
  const double d = std::sqrt(eta_plus) - 1.0;
  const double en = eta_plus * n_plus;
  QubitFidelity q;
  q.fidelity = 1.0 - 5.0 / 3.0 * en + 2.0 / 3.0 * d + d * d / 6.0;
  if (std::abs(d) > 0.2) q.warnings.push_back("|sqrt(eta) - 1| > 0.2: outside the small-loss expansion");
  if (en > 0.2) q.warnings.push_back("eta N > 0.2: outside the low-noise expansion");
  return q;
}

}  // namespace qtr
