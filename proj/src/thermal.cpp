#include "qtransduce/thermal.hpp"

#include <cmath>
#include <string>

#include "qtransduce/errors.hpp"
#include "qtransduce/units.hpp"

namespace qtr {

double bose_occupancy(double omega, double temperature) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw DomainError("occupancy requested at non-positive lab frequency " + std::to_string(omega) + " rad/s");
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw DomainError("temperature must be finite and non-negative");
  if (temperature == 0.0) return 0.0;
  const double x = kHbarOverKb * omega / temperature;
  // expm1 keeps precision for x << 1; exp underflow gives 0 for huge x
  return 1.0 / std::expm1(x);
}

}  // namespace qtr
