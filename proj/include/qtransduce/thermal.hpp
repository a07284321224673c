#pragma once

namespace qtr {

/// Mean Bose occupation 1/(exp(hbar w / k_B T) - 1) at lab-frame angular frequency w.
/// T = 0 gives exactly 0. Throws DomainError for w <= 0 or T < 0.
double bose_occupancy(double omega, double temperature);

}  // namespace qtr
