#pragma once

// Chordal Loewner evolution restricted to two real boundary points.
//
// Under dg/dt = 2 / (g - W(t)) with W a Brownian motion of rate kappa, the
// images x- = g_t(-a) and x+ = g_t(b) move away from W until W catches one of
// them; that point is then swallowed by the hull.  The race between the two
// swallow times gives the crossing probability between (-inf, -a) and (0, b).

#include <cstdint>

namespace perc {

struct SleParams {
  double kappa = 6.0;
  double dt0 = 1.0;           // step cap
  double eps_swallow = 1e-6;  // gap at which a point counts as swallowed
  double t_max = 1e5;
  bool adaptive = true;       // shrink dt to c_gap * gap^2 / 2 near the driving point
  double c_gap = 0.1;

  /// Defaults scaled to the problem size s = a + b: dt0 = s^2,
  /// eps_swallow = 1e-6 s, t_max = 1e5 s^2.
  ///
  /// A point captured at gap eps would still escape with probability about
  /// 0.57 (eps/s)^(1/3), so eps sets the bias floor (~1e-3 here).  The
  /// unresolved fraction decays only like a small power of t_max; at 1e5 s^2
  /// it is below 0.1%.
  static SleParams defaults_for(double a, double b);

  /// Same run with every step halved: dt0 and c_gap both divided by two.
  SleParams halved() const {
    SleParams p = *this;
    p.dt0 *= 0.5;
    p.c_gap *= 0.5;
    return p;
  }
};

enum class RaceWinner { left_first, right_first, unresolved };

struct HitResult {
  RaceWinner winner = RaceWinner::unresolved;
  double t_left = 0.0;   // swallow time of -a, or t_max if not swallowed
  double t_right = 0.0;  // swallow time of b, or t_max if not swallowed
  std::uint64_t steps = 0;
};

/// State of the two tracked points relative to the driving function.
struct LoewnerPair {
  double drive = 0.0;
  double left = 0.0;   // g_t(-a) < drive
  double right = 0.0;  // g_t(b) > drive

  double left_gap() const { return drive - left; }
  double right_gap() const { return right - drive; }

  /// One step of the Loewner flow for both points, driven by an increment of
  /// W with quadratic variation kappa dt.  Integrates the gaps in log
  /// coordinates, so they stay positive.
  void advance(double dt, double drive_increment, double kappa);
};

void validate(const SleParams& params);

HitResult simulate_race(double a, double b, const SleParams& params, std::uint64_t seed);

struct RaceEstimate {
  double a = 0.0;
  double b = 0.0;
  double eta = 0.0;  // b / (a + b)
  std::uint64_t traces = 0;
  std::uint64_t left_first = 0;
  std::uint64_t right_first = 0;
  std::uint64_t unresolved = 0;
  double p_hat = 0.0;  // left_first / resolved traces
  double ci_low = 0.0;
  double ci_high = 1.0;
  double unresolved_fraction = 0.0;
  bool unresolved_warning = false;  // unresolved fraction >= 1%
  std::uint64_t master_seed = 0;
  SleParams params;
};

/// Pr(T_{-a} < T_b) from n_traces races; trace i uses derive_seed(master_seed, i).
RaceEstimate estimate_left_first(double a, double b, std::uint64_t n_traces, const SleParams& params,
                                 std::uint64_t master_seed, int workers = 1);

}  // namespace perc
