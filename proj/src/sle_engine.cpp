#include "perc/sle_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "perc/errors.hpp"
#include "perc/rng.hpp"
#include "perc/stats.hpp"

namespace perc {
namespace {


}  // namespace

SleParams SleParams::defaults_for(double a, double b) {
  const double s = a + b;
  SleParams p;
  p.dt0 = s * s;
  p.eps_swallow = 1e-6 * s;
  p.t_max = 1e5 * s * s;
  return p;
}

void LoewnerPair::advance(double dt, double drive_increment, double kappa) {
  // Each gap Y obeys dY = 2 dt / Y -/+ dW, so d ln Y = (2 - kappa/2) dt / Y^2 -/+ dW / Y.
  // Stepping ln Y keeps both gaps positive for any increment.
  const double lg = left_gap();
  const double rg = right_gap();
  const double drift = 2.0 - 0.5 * kappa;
  const double new_lg = lg * std::exp(drift * dt / (lg * lg) + drive_increment / lg);
  const double new_rg = rg * std::exp(drift * dt / (rg * rg) - drive_increment / rg);
  drive += drive_increment;
  left = drive - new_lg;
  right = drive + new_rg;
}

void validate(const SleParams& p) {
  if (!(p.kappa > 0.0)) throw InvalidInput("sle: kappa must be positive");
  if (!(p.dt0 > 0.0)) throw InvalidInput("sle: dt0 must be positive");
  if (!(p.eps_swallow > 0.0)) throw InvalidInput("sle: eps_swallow must be positive");
  if (!(p.t_max > 0.0)) throw InvalidInput("sle: t_max must be positive");
  if (!(p.c_gap > 0.0)) throw InvalidInput("sle: c_gap must be positive");
}

HitResult simulate_race(double a, double b, const SleParams& params, std::uint64_t seed) {
  if (!(a > 0.0 && b > 0.0)) throw InvalidInput("sle: a and b must be positive");
  validate(params);
  CounterRng rng(seed);
  LoewnerPair state{0.0, -a, b};
  const double sigma_rate = std::sqrt(params.kappa);
  HitResult out;
  double t = 0.0;
  while (t < params.t_max) {
    const double gap = std::min(state.left_gap(), state.right_gap());
    double dt = params.dt0;
    if (params.adaptive) dt = std::min(dt, 0.5 * params.c_gap * gap * gap);
    dt = std::min(dt, params.t_max - t);
    const double dw = sigma_rate * std::sqrt(dt) * rng.normal();
    state.advance(dt, dw, params.kappa);
    t += dt;
    ++out.steps;
    const bool left_hit = state.left_gap() <= params.eps_swallow;
    const bool right_hit = state.right_gap() <= params.eps_swallow;
    if (left_hit) {
      out.winner = RaceWinner::left_first;
      out.t_left = t;
      out.t_right = params.t_max;
      return out;
    }
    if (right_hit) {
      out.winner = RaceWinner::right_first;
      out.t_right = t;
      out.t_left = params.t_max;
      return out;
    }
  }
  out.t_left = params.t_max;
  out.t_right = params.t_max;
  return out;
}

RaceEstimate estimate_left_first(double a, double b, std::uint64_t n_traces, const SleParams& params,
                                 std::uint64_t master_seed, int workers) {
  if (n_traces < 1) throw InvalidInput("sle: n_traces must be >= 1");
  if (!(a > 0.0 && b > 0.0)) throw InvalidInput("sle: a and b must be positive");
  validate(params);
  struct Counts {
    std::uint64_t left = 0, right = 0, unresolved = 0;
  };
  const auto run = [&](std::uint64_t first, std::uint64_t last) {
    Counts c;
    for (std::uint64_t i = first; i < last; ++i) {
      switch (simulate_race(a, b, params, derive_seed(master_seed, i)).winner) {
        case RaceWinner::left_first: ++c.left; break;
        case RaceWinner::right_first: ++c.right; break;
        case RaceWinner::unresolved: ++c.unresolved; break;
      }
    }
    return c;
  };
  const std::uint64_t w = std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(workers, 1)), 1, n_traces);
  std::vector<Counts> partial(w);
  if (w == 1) {
    partial[0] = run(0, n_traces);
  } else {
    std::vector<std::thread> threads;
    for (std::uint64_t k = 0; k < w; ++k) {
      threads.emplace_back([&, k] { partial[k] = run(n_traces * k / w, n_traces * (k + 1) / w); });
    }
    for (auto& t : threads) t.join();
  }
  RaceEstimate e;
  e.a = a;
  e.b = b;
  e.eta = b / (a + b);
  e.traces = n_traces;
  for (const auto& c : partial) {
    e.left_first += c.left;
    e.right_first += c.right;
    e.unresolved += c.unresolved;
  }
  const std::uint64_t resolved = e.left_first + e.right_first;
  e.p_hat = resolved == 0 ? 0.0 : static_cast<double>(e.left_first) / static_cast<double>(resolved);
  const Interval ci = wilson_interval(e.left_first, resolved);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.unresolved_fraction = static_cast<double>(e.unresolved) / static_cast<double>(n_traces);
  e.unresolved_warning = e.unresolved_fraction >= 0.01;
  e.master_seed = master_seed;
  e.params = params;
  return e;
}

}  // namespace perc
