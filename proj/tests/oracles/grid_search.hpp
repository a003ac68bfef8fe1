#pragma once

// Dense enumeration of control and disturbance sets, independent of the
// closed-form optima in the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace oracle {

struct Bounds {
  double v_min, v_max, w_max, d_r, d_th;
};

// Points of [lo, hi] at spacing <= res, endpoints included.
template <typename F>
void for_each_in(double lo, double hi, double res, F&& f) {
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / res)));
  for (int i = 0; i <= n; ++i) f(lo + (hi - lo) * i / n);
}

// Extremum over the speed interval of v * c.
inline double speed_term(double c, double lo, double hi, bool maximize, double res) {
  double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  for_each_in(lo, hi, res, [&](double v) { best = maximize ? std::max(best, v * c) : std::min(best, v * c); });
  return best;
}

// Extremum over the planar disturbance ball (angles and radii enumerated) of
// the dot product with (a, b), plus the heading disturbance term.
inline double disturbance_term(double a, double b, double c, double d_r, double d_th, bool maximize, double res) {
  double best_p = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  if (d_r == 0.0) {
    best_p = 0.0;
  } else {
    const double two_pi = 2 * 3.14159265358979323846;
    for_each_in(0.0, d_r, d_r / 10, [&](double rad) {
      for_each_in(0.0, two_pi, res, [&](double ang) {
        const double val = rad * (a * std::cos(ang) + b * std::sin(ang));
        best_p = maximize ? std::max(best_p, val) : std::min(best_p, val);
      });
    });
  }
  double best_t = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  if (d_th == 0.0) {
    best_t = 0.0;
  } else {
    for_each_in(-d_th, d_th, res, [&](double dt) { best_t = maximize ? std::max(best_t, dt * c) : std::min(best_t, dt * c); });
  }
  return best_p + best_t;
}

// opt_u [opt_d] lambda . f for the Dubins car; the objective is a sum of terms
// each depending on one decision variable, so optimizing term by term over
// the enumerated sets equals optimizing over their product.
inline double dubins_hamiltonian(const std::array<double, 3>& l, double theta, const Bounds& b,
                                 bool control_max, bool with_dstb, double res = 1e-3) {
  const double c = l[0] * std::cos(theta) + l[1] * std::sin(theta);
  double h = speed_term(c, b.v_min, b.v_max, control_max, res) + speed_term(l[2], -b.w_max, b.w_max, control_max, res);
  if (with_dstb) h += disturbance_term(l[0], l[1], l[2], b.d_r, b.d_th, true, res);
  return h;
}

// max_u min_{u_r, d} lambda . f_e for the relative tracking dynamics
// (tracker bounds `t`, reference bounds `r`, disturbance from `t`).
inline double error_hamiltonian(const std::array<double, 3>& l, double ex, double ey, double eth, const Bounds& t,
                                const Bounds& r, double res = 1e-3) {
  const double k = l[0] * ey - l[1] * ex - l[2];
  const double cr = l[0] * std::cos(eth) + l[1] * std::sin(eth);
  return speed_term(-l[0], t.v_min, t.v_max, true, res) + speed_term(k, -t.w_max, t.w_max, true, res) +
         speed_term(cr, r.v_min, r.v_max, false, res) + speed_term(l[2], -r.w_max, r.w_max, false, res) +
         disturbance_term(l[0], l[1], l[2], t.d_r, t.d_th, false, res);
}

}  // namespace oracle
