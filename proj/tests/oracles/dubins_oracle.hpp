#pragma once

// Closed-form Dubins shortest paths (the six CSC/CCC words), used as an
// independent reference for minimum-time reachability of a constant-speed car.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline double mod2pi(double a) {
  double r = std::fmod(a, 2 * kPi);
  return r < 0 ? r + 2 * kPi : r;
}

enum class Seg { L, S, R };

struct DubinsPath {
  std::array<Seg, 3> segs;
  std::array<double, 3> len;  // normalized by the turning radius
  double total() const { return len[0] + len[1] + len[2]; }
};

struct Pose {
  double x, y, th;
};

// All feasible words between two poses for unit turning radius after scaling.
inline std::vector<DubinsPath> dubins_words(Pose a, Pose b, double rho) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double d = std::hypot(dx, dy) / rho;
  const double phi = std::atan2(dy, dx);
  const double al = mod2pi(a.th - phi), be = mod2pi(b.th - phi);
  const double sa = std::sin(al), sb = std::sin(be), ca = std::cos(al), cb = std::cos(be);
  const double cab = std::cos(al - be);
  std::vector<DubinsPath> out;

  {  // LSL
    const double p2 = 2 + d * d - 2 * cab + 2 * d * (sa - sb);
    if (p2 >= 0) {
      const double tmp = std::atan2(cb - ca, d + sa - sb);
      out.push_back({{Seg::L, Seg::S, Seg::L}, {mod2pi(-al + tmp), std::sqrt(p2), mod2pi(be - tmp)}});
    }
  }
  {  // RSR
    const double p2 = 2 + d * d - 2 * cab + 2 * d * (sb - sa);
    if (p2 >= 0) {
      const double tmp = std::atan2(ca - cb, d - sa + sb);
      out.push_back({{Seg::R, Seg::S, Seg::R}, {mod2pi(al - tmp), std::sqrt(p2), mod2pi(-be + tmp)}});
    }
  }
  {  // LSR
    const double p2 = -2 + d * d + 2 * cab + 2 * d * (sa + sb);
    if (p2 >= 0) {
      const double p = std::sqrt(p2);
      const double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
      out.push_back({{Seg::L, Seg::S, Seg::R}, {mod2pi(-al + tmp), p, mod2pi(-be + tmp)}});
    }
  }
  {  // RSL
    const double p2 = -2 + d * d + 2 * cab - 2 * d * (sa + sb);
    if (p2 >= 0) {
      const double p = std::sqrt(p2);
      const double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
      out.push_back({{Seg::R, Seg::S, Seg::L}, {mod2pi(al - tmp), p, mod2pi(be - tmp)}});
    }
  }
  {  // RLR
    const double c = (6 - d * d + 2 * cab + 2 * d * (sa - sb)) / 8;
    if (std::abs(c) <= 1) {
      const double p = mod2pi(2 * kPi - std::acos(c));
      const double t = mod2pi(al - std::atan2(ca - cb, d - sa + sb) + p / 2);
      out.push_back({{Seg::R, Seg::L, Seg::R}, {t, p, mod2pi(al - be - t + p)}});
    }
  }
  {  // LRL
    const double c = (6 - d * d + 2 * cab + 2 * d * (sb - sa)) / 8;
    if (std::abs(c) <= 1) {
      const double p = mod2pi(2 * kPi - std::acos(c));
      const double t = mod2pi(-al - std::atan2(ca - cb, d + sa - sb) + p / 2);
      out.push_back({{Seg::L, Seg::R, Seg::L}, {t, p, mod2pi(be - al - t + p)}});
    }
  }
  return out;
}

// Pose after following `path` for normalized arc length s.
inline Pose follow(Pose a, const DubinsPath& path, double rho, double s_total) {
  Pose p = a;
  double left = s_total;
  for (int i = 0; i < 3 && left > 0; ++i) {
    const double s = std::min(left, path.len[i]);
    left -= s;
    switch (path.segs[i]) {
      case Seg::S:
        p.x += rho * s * std::cos(p.th);
        p.y += rho * s * std::sin(p.th);
        break;
      case Seg::L:
        p.x += rho * (std::sin(p.th + s) - std::sin(p.th));
        p.y += rho * (-std::cos(p.th + s) + std::cos(p.th));
        p.th += s;
        break;
      case Seg::R:
        p.x += rho * (-std::sin(p.th - s) + std::sin(p.th));
        p.y += rho * (std::cos(p.th - s) - std::cos(p.th));
        p.th -= s;
        break;
    }
  }
  p.th = mod2pi(p.th);
  return p;
}

struct Box {
  double xmin, xmax, ymin, ymax;
};

// True when every point sampled along the path lies inside `box`.
inline bool path_inside(Pose a, const DubinsPath& path, double rho, const Box& box, int samples = 200) {
  for (int k = 0; k <= samples; ++k) {
    const Pose p = follow(a, path, rho, path.total() * k / samples);
    if (p.x < box.xmin || p.x > box.xmax || p.y < box.ymin || p.y > box.ymax) return false;
  }
  return true;
}

struct DiskReach {
  double time = std::numeric_limits<double>::infinity();
  Pose start{};
  DubinsPath path{};
  bool inside_box = false;
};

// Minimum time for a speed-v, turn-rate-w car to reach the closed disk
// (center c, radius r), sampling boundary points and arrival headings.
inline DiskReach min_time_to_disk(Pose a, double cx, double cy, double r, double v, double w,
                                  int n_points = 360, int n_headings = 360) {
  DiskReach best;
  best.start = a;
  if (std::hypot(a.x - cx, a.y - cy) <= r) {
    best.time = 0.0;
    best.path = {{Seg::S, Seg::S, Seg::S}, {0, 0, 0}};
    return best;
  }
  const double rho = v / w;
  for (int i = 0; i < n_points; ++i) {
    const double ang = 2 * kPi * i / n_points;
    const double bx = cx + r * std::cos(ang), by = cy + r * std::sin(ang);
    for (int j = 0; j < n_headings; ++j) {
      const Pose b{bx, by, 2 * kPi * j / n_headings};
      for (const DubinsPath& p : dubins_words(a, b, rho)) {
        const double t = p.total() * rho / v;
        if (t < best.time) {
          best.time = t;
          best.path = p;
        }
      }
    }
  }
  return best;
}

}  // namespace oracle
