#pragma once

// Heralded entanglement of two emitters through transducers and a 50:50
// beamsplitter. One-click: one round, a click in exactly one arm heralds.
// Two-click: a second round after a pi pulse on both emitters, both rounds
// must herald. States are labelled by the round-one emitter configuration.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qtr {

enum class Scheme { one_click, two_click };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);  // "one-click" | "two-click"

struct ProtocolParams {
  Scheme scheme = Scheme::one_click;
  double p_e = 0.0;  // excitation probability [0, 1]
  double p_d = 0.0;  // dark-count probability per detector per round [0, 1)
  double eta = 0.0;  // per-photon transduction and detection efficiency [0, 1]
};

/// Throws DomainError outside the ranges above.
void check(const ProtocolParams& setup);

enum Population : std::size_t { pop_00 = 0, pop_01, pop_10, pop_11, pop_psi, n_populations };

struct ProtocolResult {
  std::array<double, n_populations> populations{};  // normalized; |Psi-> already rotated to |Psi+>
  double fidelity = 0.0;                            // <Psi+| rho |Psi+>
  double success_probability = 0.0;                 // all heralds, dark-count ones included
  double signal_success_probability = 0.0;         // every heralding round had a detected signal photon
  double normalization = 0.0;                       // unnormalized trace of the heralded state

  // Monte Carlo only
  long long trials = 0;
  long long heralds = 0;
  double fidelity_stderr = 0.0;
  double success_stderr = 0.0;
  std::array<double, n_populations> population_stderr{};
};

/// Closed-form heralded state. Throws NoHeraldError when nothing can ever herald.
ProtocolResult entangle_fidelity_exact(const ProtocolParams& setup);

/// Printed fidelity expressions.
double one_click_fidelity(double p_e, double p_d, double eta);
double two_click_fidelity(double p_d, double eta);  // at the optimum P_e = 1/2

struct AsymptoticFidelity {
  double fidelity = 0.0;     // one-click: 1 - P_e(1 - eta/2) - P_d/(eta P_e); two-click: 1 - (6/eta - 4) P_d
  double p_e_opt = 0.0;      // one-click only
  double fidelity_opt = 0.0; // one-click at p_e_opt; two-click: same as fidelity
  std::vector<std::string> warnings;
};

/// Leading-order expansions for P_d / eta << P_e << 1 (one-click) and P_d << eta (two-click).
AsymptoticFidelity entangle_fidelity_asymptotic(const ProtocolParams& setup);

/// Optimal one-click and two-click fidelities in terms of eta+ N+ B T (the mean dark count per window).
struct FidelityPair {
  double one_click = 0.0;
  double two_click = 0.0;
};
FidelityPair fidelity_comparison(double eta, double dark_mean);
/// eta -> 0 limit, in terms of N+ B T.
FidelityPair fidelity_low_efficiency(double n_bt);

/// P_d = 1 - exp(-r_N T)
double dark_count_probability(double rate, double window);

/// Exhaustive walk over emissions, photon losses, beamsplitter routing and dark counts.
ProtocolResult protocol_enumerate(const ProtocolParams& setup);

struct MonteCarloOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Deterministic in (setup, trials, seed) for any thread count.
/// Throws NoHeraldError carrying the herald count (0) when no trial heralds.
ProtocolResult protocol_montecarlo(const ProtocolParams& setup, long long trials, std::uint64_t seed,
                                   const MonteCarloOptions& options = {});

}  // namespace qtr
