#include "qtransduce/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "qtransduce/errors.hpp"

namespace qtr {

std::string to_string(Scheme s) { return s == Scheme::one_click ? "one-click" : "two-click"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "one-click") return Scheme::one_click;
  if (s == "two-click") return Scheme::two_click;
  throw ConfigurationError("unknown scheme '" + s + "' (expected one-click or two-click)");
}

void check(const ProtocolParams& s) {
  if (!(s.p_e >= 0.0 && s.p_e <= 1.0)) throw DomainError("p_e must lie in [0, 1]");
  if (!(s.p_d >= 0.0 && s.p_d < 1.0)) throw DomainError("p_d must lie in [0, 1)");
  if (!(s.eta >= 0.0 && s.eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
}

namespace {

// fills the normalized fields from unnormalized branch weights
ProtocolResult finish(const std::array<double, n_populations>& w, double signal_weight) {
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0)) throw NoHeraldError("no outcome ever heralds for these parameters", 0);
  ProtocolResult r;
  r.normalization = total;
  r.success_probability = total;
  r.signal_success_probability = signal_weight;
  for (std::size_t k = 0; k < n_populations; ++k) r.populations[k] = w[k] / total;
  r.fidelity = r.populations[pop_psi] + 0.5 * (r.populations[pop_01] + r.populations[pop_10]);
  return r;
}

}  // namespace

ProtocolResult entangle_fidelity_exact(const ProtocolParams& setup) {
  check(setup);
  const double pe = setup.p_e, pd = setup.p_d, eta = setup.eta;
  const double ge = pe * (1.0 - pe);
  const double lost2 = (1.0 - eta) * (1.0 - eta);
  const double dark1 = 2.0 * pd * (1.0 - pd);  // exactly one of two detectors fires
  std::array<double, n_populations> w{};
  double signal = 0.0;
  if (setup.scheme == Scheme::one_click) {
    w[pop_00] = (1.0 - pe) * (1.0 - pe) * dark1;
    w[pop_psi] = 2.0 * ge * eta * (1.0 - pd);
    w[pop_01] = w[pop_10] = ge * (1.0 - eta) * dark1;
    w[pop_11] = pe * pe * ((1.0 - lost2) + lost2 * 2.0 * pd) * (1.0 - pd);
    signal = w[pop_psi] + pe * pe * (1.0 - lost2) * (1.0 - pd);
  } else {
    const double both = (1.0 - lost2) * (1.0 - pd) + lost2 * dark1;  // two emitters, one round
    const double single = eta * (1.0 - pd) + (1.0 - eta) * dark1;    // one emitter, one round
    const double coherent = eta * eta * (1.0 - pd) * (1.0 - pd);
    w[pop_00] = (1.0 - pe) * (1.0 - pe) * dark1 * both;
    w[pop_11] = pe * pe * both * dark1;
    w[pop_psi] = 2.0 * ge * coherent;
    w[pop_01] = w[pop_10] = ge * (single * single - coherent);
    signal = w[pop_psi];
  }
  return finish(w, signal);
}

double one_click_fidelity(double pe, double pd, double eta) {
  const double den = pe * eta * (1.0 - 2.0 * pd) * (2.0 - pe * eta) + 2.0 * pd;
  if (!(den > 0.0)) throw NoHeraldError("one-click fidelity undefined: nothing ever clicks", 0);
  return (2.0 * pe * (1.0 - pe) * eta + pe * (1.0 - pe) * (1.0 - eta) * 2.0 * pd) / den;
}

double two_click_fidelity(double pd, double eta) {
  const double l = 1.0 - eta;
  const double den = 8.0 * pd * pd * l * l + 2.0 * pd * (4.0 - 3.0 * eta) * eta + eta * eta;
  if (!(den > 0.0)) throw NoHeraldError("two-click fidelity undefined: nothing ever clicks", 0);
  return (2.0 * pd * pd * l * l + 2.0 * pd * l * eta + eta * eta) / den;
}

AsymptoticFidelity entangle_fidelity_asymptotic(const ProtocolParams& setup) {
  check(setup);
  if (!(setup.eta > 0.0)) throw DomainError("asymptotic fidelity needs eta > 0");
  const double pe = setup.p_e, pd = setup.p_d, eta = setup.eta;
  AsymptoticFidelity a;
  if (setup.scheme == Scheme::one_click) {
    a.p_e_opt = std::sqrt(pd / (eta * (1.0 - 0.5 * eta)));
    a.fidelity_opt = 1.0 - 2.0 * std::sqrt((1.0 / eta - 0.5) * pd);
    if (pe > 0.0) {
      a.fidelity = 1.0 - pe * (1.0 - 0.5 * eta) - pd / (eta * pe);
      if (pe > 0.1) a.warnings.push_back("P_e > 0.1: outside P_e << 1");
      if (pd / eta > 0.1 * pe) a.warnings.push_back("P_d / eta not << P_e");
    } else {
      a.fidelity = std::numeric_limits<double>::quiet_NaN();
      a.warnings.push_back("P_e = 0: expansion undefined");
    }
  } else {
    a.p_e_opt = 0.5;
    a.fidelity = a.fidelity_opt = 1.0 - (6.0 / eta - 4.0) * pd;
    if (pd > 0.1 * eta) a.warnings.push_back("P_d not << eta");
  }
  return a;
}

FidelityPair fidelity_comparison(double eta, double dark_mean) {
  if (!(eta > 0.0 && eta <= 1.0) || !(dark_mean >= 0.0))
    throw DomainError("fidelity comparison needs eta in (0, 1] and a non-negative dark count");
  return {1.0 - 2.0 * std::sqrt((1.0 / eta - 0.5) * dark_mean), 1.0 - (6.0 / eta - 4.0) * dark_mean};
}

FidelityPair fidelity_low_efficiency(double n_bt) {
  if (!(n_bt >= 0.0)) throw DomainError("N+ B T must be non-negative");
  return {1.0 - 2.0 * std::sqrt(n_bt), 1.0 - 6.0 * n_bt};
}

double dark_count_probability(double rate, double window) {
  if (!(rate >= 0.0) || !(window >= 0.0)) throw DomainError("dark count rate and window must be non-negative");
  return -std::expm1(-rate * window);
}

// ---- enumeration oracle -----------------------------------------------------

namespace {

struct Leaf {
  double p;
  bool herald;
  bool all_detected;  // no emitted photon was lost
  bool signal;        // at least one detected photon
};

// one round with the given emitters; calls f for every leaf
template <class F>
void walk_round(bool e1, bool e2, const ProtocolParams& s, F&& f) {
  const int emitted = int(e1) + int(e2);
  for (int lost_mask = 0; lost_mask < (1 << emitted); ++lost_mask) {
    double p = 1.0;
    int detected = 0;
    for (int k = 0; k < emitted; ++k) {
      if (lost_mask >> k & 1) {
        p *= 1.0 - s.eta;
      } else {
        p *= s.eta;
        ++detected;
      }
    }
    // detected photons leave through one arm together: a single photon picks
    // an arm at random, a pair bunches
    for (int arm = 0; arm < (detected ? 2 : 1); ++arm) {
      const double p_route = detected ? 0.5 : 1.0;
      for (int dark = 0; dark < 4; ++dark) {
        const bool dl = dark & 1, dr = dark & 2;
        const double p_dark = (dl ? s.p_d : 1.0 - s.p_d) * (dr ? s.p_d : 1.0 - s.p_d);
        const bool left = dl || (detected && arm == 0);
        const bool right = dr || (detected && arm == 1);
        f(Leaf{p * p_route * p_dark, left != right, lost_mask == 0, detected > 0});
      }
    }
  }
}

}  // namespace

ProtocolResult protocol_enumerate(const ProtocolParams& setup) {
  check(setup);
  std::array<double, n_populations> w{};
  double signal = 0.0;
  for (int c = 0; c < 4; ++c) {
    const bool e1 = c & 1, e2 = c & 2;
    const double pc = (e1 ? setup.p_e : 1.0 - setup.p_e) * (e2 ? setup.p_e : 1.0 - setup.p_e);
    const Population label = c == 0 ? pop_00 : c == 3 ? pop_11 : (e1 ? pop_10 : pop_01);
    auto book = [&](double p, bool all_detected, bool sig) {
      const bool coherent = (c == 1 || c == 2) && all_detected;
      w[coherent ? pop_psi : label] += pc * p;
      if (sig) signal += pc * p;
    };
    walk_round(e1, e2, setup, [&](const Leaf& a) {
      if (!a.herald) return;
      if (setup.scheme == Scheme::one_click) {
        book(a.p, a.all_detected, a.signal);
        return;
      }
      // pi pulse: the emitters that were dark now emit
      walk_round(!e1, !e2, setup, [&](const Leaf& b) {
        if (b.herald) book(a.p * b.p, a.all_detected && b.all_detected, a.signal && b.signal);
      });
    });
  }
  return finish(w, signal);
}

// ---- Monte Carlo ------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Stream {
  std::uint64_t state;
  Stream(std::uint64_t seed, std::uint64_t trial) : state(seed) {
    state ^= trial * 0xD1B54A32D192ED03ULL;
    splitmix64(state);
  }
  double uniform() { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
};

struct Tally {
  std::array<long long, n_populations> counts{};
  long long heralds = 0;
  long long signal = 0;
  void merge(const Tally& o) {
    for (std::size_t k = 0; k < n_populations; ++k) counts[k] += o.counts[k];
    heralds += o.heralds;
    signal += o.signal;
  }
};

struct RoundDraw {
  bool herald;
  bool all_detected;
  bool signal;
};

RoundDraw draw_round(bool e1, bool e2, const ProtocolParams& s, Stream& rng) {
  int detected = 0;
  bool lost = false;
  for (bool e : {e1, e2}) {
    if (!e) continue;
    if (rng.bernoulli(s.eta))
      ++detected;
    else
      lost = true;
  }
  const int arm = rng.bernoulli(0.5) ? 1 : 0;
  const bool left = rng.bernoulli(s.p_d) || (detected && arm == 0);
  const bool right = rng.bernoulli(s.p_d) || (detected && arm == 1);
  return {left != right, !lost, detected > 0};
}

void run_trial(const ProtocolParams& s, Stream& rng, Tally& t) {
  const bool e1 = rng.bernoulli(s.p_e), e2 = rng.bernoulli(s.p_e);
  auto r = draw_round(e1, e2, s, rng);
  if (!r.herald) return;
  bool all_detected = r.all_detected, signal = r.signal;
  if (s.scheme == Scheme::two_click) {
    const auto r2 = draw_round(!e1, !e2, s, rng);
    if (!r2.herald) return;
    all_detected = all_detected && r2.all_detected;
    signal = signal && r2.signal;
  }
  Population k = pop_00;
  if (e1 && e2)
    k = pop_11;
  else if (e1 != e2)
    k = all_detected ? pop_psi : (e1 ? pop_10 : pop_01);
  ++t.counts[k];
  ++t.heralds;
  if (signal) ++t.signal;
}

}  // namespace

ProtocolResult protocol_montecarlo(const ProtocolParams& setup, long long trials, std::uint64_t seed,
                                   const MonteCarloOptions& options) {
  check(setup);
  if (trials < 1) throw DomainError("Monte Carlo needs at least one trial");
  constexpr long long kChunk = 1 << 16;
  const long long n_chunks = (trials + kChunk - 1) / kChunk;
  std::vector<Tally> tallies(static_cast<std::size_t>(n_chunks));
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long long>(threads, n_chunks));

  auto work = [&](unsigned tid) {
    for (long long c = tid; c < n_chunks; c += threads) {
      Tally& t = tallies[static_cast<std::size_t>(c)];
      const long long end = std::min(trials, (c + 1) * kChunk);
      for (long long i = c * kChunk; i < end; ++i) {
        Stream rng(seed, static_cast<std::uint64_t>(i));
        run_trial(setup, rng, t);
      }
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  Tally total;
  for (const auto& t : tallies) total.merge(t);
  if (total.heralds == 0) throw NoHeraldError("no heralded events in " + std::to_string(trials) + " trials", 0);

  ProtocolResult r;
  const double h = static_cast<double>(total.heralds);
  const double n = static_cast<double>(trials);
  r.trials = trials;
  r.heralds = total.heralds;
  r.normalization = h / n;
  r.success_probability = h / n;
  r.success_stderr = std::sqrt(r.success_probability * (1.0 - r.success_probability) / n);
  r.signal_success_probability = static_cast<double>(total.signal) / n;
  for (std::size_t k = 0; k < n_populations; ++k) {
    const double p = static_cast<double>(total.counts[k]) / h;
    r.populations[k] = p;
    r.population_stderr[k] = std::sqrt(p * (1.0 - p) / h);
  }
  // per-herald score: 1 for Psi+, 1/2 for a mixed single excitation, 0 otherwise
  const double mixed = r.populations[pop_01] + r.populations[pop_10];
  r.fidelity = r.populations[pop_psi] + 0.5 * mixed;
  const double second = r.populations[pop_psi] + 0.25 * mixed;
  r.fidelity_stderr = std::sqrt(std::max(0.0, second - r.fidelity * r.fidelity) / h);
  return r;
}

}  // namespace qtr
