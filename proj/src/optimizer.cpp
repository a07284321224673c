#include "qtransduce/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "qtransduce/errors.hpp"

namespace qtr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::vector<double>;

struct Vertex {
  Point u;
  double f;
};

class Run {
 public:
  Run(const std::function<double(const Point&)>& f, const std::vector<Bound>& b, int start, int budget)
      : f_(f), bounds_(b), start_(start), budget_(budget) {}

  bool exhausted() const { return static_cast<int>(trace.size()) >= budget_; }

  double eval(Point& u) {
    for (double& c : u) c = std::clamp(c, 0.0, 1.0);
    Evaluation e;
    e.start = start_;
    e.x = to_x(u);
    try {
      e.value = f_(e.x);
      if (std::isnan(e.value)) throw DomainError("objective returned NaN");
    } catch (const Error& err) {
      e.value = kInf;
      e.feasible = false;
      e.error = err.what();
    }
    trace.push_back(e);
    return e.value;
  }

  Point to_x(const Point& u) const {
    Point x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto& b = bounds_[i];
      x[i] = b.log ? std::exp(std::log(b.lo) + u[i] * (std::log(b.hi) - std::log(b.lo))) : b.lo + u[i] * (b.hi - b.lo);
      x[i] = std::clamp(x[i], b.lo, b.hi);
    }
    return x;
  }

  std::vector<Evaluation> trace;
  bool converged = false;

 private:
  const std::function<double(const Point&)>& f_;
  const std::vector<Bound>& bounds_;
  int start_;
  int budget_;
};

void nelder_mead(Run& run, Point u0, const NelderMeadOptions& o) {
  const std::size_t n = u0.size();
  std::vector<Vertex> s;
  s.push_back({u0, run.eval(u0)});
  for (std::size_t i = 0; i < n && !run.exhausted(); ++i) {
    Point u = s[0].u;
    u[i] += u[i] + 0.25 <= 1.0 ? 0.25 : -0.25;
    s.push_back({u, run.eval(u)});
  }
  if (s.size() < n + 1) return;
  // objective scale at the start, so a minimum at 0 can still converge
  double scale = 0.0;
  for (const auto& v : s)
    if (std::isfinite(v.f)) scale = std::max(scale, std::abs(v.f));

  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  while (!run.exhausted()) {
    std::sort(s.begin(), s.end(), by_f);
    double diam = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(s[i].u[k] - s[0].u[k]));
    const double spread = s[n].f - s[0].f;
    if (std::isfinite(spread) && spread <= o.tolerance * (std::abs(s[0].f) + 1e-6 * scale) && diam <= o.x_tolerance) {
      run.converged = true;
      return;
    }
    if (diam == 0.0) return;  // collapsed onto a corner of the box

    Point c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) c[k] += s[i].u[k] / static_cast<double>(n);
    auto along = [&](double t) {
      Point p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = c[k] + t * (s[n].u[k] - c[k]);
      return p;
    };

    Point r = along(-1.0);
    const double fr = run.eval(r);
    if (fr < s[0].f) {
      if (run.exhausted()) {
        s[n] = {r, fr};
        break;
      }
      Point e = along(-2.0);
      const double fe = run.eval(e);
      s[n] = fe < fr ? Vertex{e, fe} : Vertex{r, fr};
      continue;
    }
    if (fr < s[n - 1].f) {
      s[n] = {r, fr};
      continue;
    }
    if (run.exhausted()) break;
    const bool outside = fr < s[n].f;
    Point ct = along(outside ? -0.5 : 0.5);
    const double fc = run.eval(ct);
    if (fc < std::min(fr, s[n].f)) {
      s[n] = {ct, fc};
      continue;
    }
    // shrink toward the best vertex
    for (std::size_t i = 1; i <= n && !run.exhausted(); ++i) {
      for (std::size_t k = 0; k < n; ++k) s[i].u[k] = s[0].u[k] + 0.5 * (s[i].u[k] - s[0].u[k]);
      s[i].f = run.eval(s[i].u);
    }
  }
}

}  // namespace

OptimizeResult minimize(const std::function<double(const std::vector<double>&)>& f, const std::vector<Bound>& bounds,
                        const NelderMeadOptions& o) {
  if (bounds.empty()) throw ConfigurationError("optimizer needs at least one variable");
  for (const auto& b : bounds) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi))
      throw ConfigurationError("optimizer bounds must be finite with lower < upper");
    if (b.log && !(b.lo > 0.0)) throw ConfigurationError("log-scaled bounds need lower > 0");
  }
  if (o.max_evaluations < 1 || o.restarts < 0) throw ConfigurationError("optimizer budget must be positive");

  const int starts = std::min(o.restarts + 1, o.max_evaluations);
  std::vector<Point> u0(static_cast<std::size_t>(starts), Point(bounds.size(), 0.5));
  for (int k = 1; k < starts; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& c : u0[static_cast<std::size_t>(k)]) c = unit(rng);
  }

  std::vector<Run> runs;
  runs.reserve(static_cast<std::size_t>(starts));
  // centre start gets half the budget, the random starts share the rest
  const int centre = starts == 1 ? o.max_evaluations : (o.max_evaluations + 1) / 2;
  const int rest = o.max_evaluations - centre, others = starts - 1;
  runs.emplace_back(f, bounds, 0, centre);
  for (int k = 1; k < starts; ++k) runs.emplace_back(f, bounds, k, rest / others + (k - 1 < rest % others ? 1 : 0));

  unsigned threads = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(starts));
  auto work = [&](unsigned t) {
    for (std::size_t k = t; k < runs.size(); k += threads) nelder_mead(runs[k], u0[k], o);
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  OptimizeResult res;
  res.best_value = kInf;
  for (auto& r : runs) {
    res.converged = res.converged || r.converged;
    for (auto& e : r.trace) {
      if (e.feasible && e.value < res.best_value) {
        res.best_value = e.value;
        res.best_x = e.x;
      }
      res.trace.push_back(std::move(e));
    }
  }
  res.evaluations = static_cast<int>(res.trace.size());
  if (res.best_x.empty())
    throw NoFeasiblePointError("no feasible evaluation in " + std::to_string(res.evaluations) + " tries");
  return res;
}

}  // namespace qtr
