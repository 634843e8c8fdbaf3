#pragma once

// Independent reference implementations used to cross-check the engine.
// Deliberately naive: no shared code with src/.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct P {
  double x = 0, y = 0;
  bool operator<(const P& o) const { return x < o.x || (x == o.x && y < o.y); }
  bool operator==(const P& o) const { return x == o.x && y == o.y; }
};

inline double orient(const P& a, const P& b, const P& c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

// O(n^3): a directed edge (a,b) is on the hull iff every other point lies
// strictly left of it, or on the segment between a and b.
inline std::set<P> brute_hull_vertices(const std::vector<P>& pts) {
  std::set<P> out;
  std::vector<P> u(pts.begin(), pts.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  if (u.size() <= 2) return {u.begin(), u.end()};
  for (const auto& a : u)
    for (const auto& b : u) {
      if (a == b) continue;
      bool edge = true;
      for (const auto& c : u) {
        if (c == a || c == b) continue;
        const double o = orient(a, b, c);
        if (o < 0) {
          edge = false;
          break;
        }
        if (o == 0) {
          const bool between = std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
                               std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
          if (!between) {
            edge = false;
            break;
          }
        }
      }
      if (edge) {
        out.insert(a);
        out.insert(b);
      }
    }
  // Drop vertices collinear with their hull neighbours.
  std::set<P> corners;
  for (const auto& v : out) {
    bool interior = false;
    for (const auto& a : out)
      for (const auto& b : out) {
        if (a == v || b == v || a == b || interior) continue;
        if (orient(a, b, v) == 0 && std::min(a.x, b.x) <= v.x && v.x <= std::max(a.x, b.x) &&
            std::min(a.y, b.y) <= v.y && v.y <= std::max(a.y, b.y)) {
          bool ab_edge = true;
          for (const auto& c : u)
            if (orient(a, b, c) < 0) ab_edge = false;
          if (ab_edge) interior = true;
        }
      }
    if (!interior) corners.insert(v);
  }
  return corners;
}

// Fan triangulation from vertex 0, summing signed triangle areas.
inline double fan_area(const std::vector<P>& poly) {
  double sum = 0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) sum += orient(poly[0], poly[i], poly[i + 1]) / 2.0;
  return std::abs(sum);
}

// Convex polygon containment by consistent orientation.
inline bool in_convex(const std::vector<P>& poly, const P& q) {
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const double o = orient(poly[i], poly[(i + 1) % poly.size()], q);
    pos |= o > 0;
    neg |= o < 0;
  }
  return !(pos && neg);
}

inline double monte_carlo_area(const std::vector<P>& poly, std::size_t samples, std::uint64_t seed) {
  double x0 = poly[0].x, x1 = x0, y0 = poly[0].y, y1 = y0;
  for (const auto& p : poly) {
    x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < samples; ++i) hit += in_convex(poly, {ux(rng), uy(rng)});
  return (x1 - x0) * (y1 - y0) * static_cast<double>(hit) / static_cast<double>(samples);
}

// Recursive Ramer-Douglas-Peucker with explicit segment distance.
inline double seg_dist(const P& p, const P& a, const P& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 == 0 ? 0 : ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

inline void rdp_rec(const std::vector<P>& s, std::size_t i, std::size_t j, double eps, std::vector<bool>& keep) {
  double best = -1;
  std::size_t at = i;
  for (std::size_t k = i + 1; k < j; ++k) {
    const double d = seg_dist(s[k], s[i], s[j]);
    if (d > best) best = d, at = k;
  }
  if (best > eps) {
    keep[at] = true;
    rdp_rec(s, i, at, eps, keep);
    rdp_rec(s, at, j, eps, keep);
  }
}

inline std::vector<P> rdp(const std::vector<P>& s, double eps) {
  std::vector<bool> keep(s.size(), false);
  keep.front() = keep.back() = true;
  rdp_rec(s, 0, s.size() - 1, eps, keep);
  std::vector<P> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (keep[i]) out.push_back(s[i]);
  return out;
}

// Layout energy recomputed from the written definition, canvas units.
struct Energy {
  double e_o, e_c, u, e_l;
};

inline Energy layout_energy(const std::vector<P>& norm, double W, double H, const std::array<double, 4>* pivot,
                            double alpha) {
  std::vector<P> pts;
  for (const auto& p : norm) pts.push_back({p.x * W, p.y * H});
  double e_o = 1;
  P ref{W / 2, H / 2};
  if (pivot) {
    const auto& b = *pivot;
    ref = {b[0] + b[2] / 2, b[1] + b[3] / 2};
    for (const auto& p : pts)
      if (p.x >= b[0] && p.x <= b[0] + b[2] && p.y >= b[1] && p.y <= b[1] + b[3]) e_o = 0;
  }
  // Hull by gift wrapping over the brute-force vertex set, ordered by angle.
  const auto hv = brute_hull_vertices(pts);
  std::vector<P> hull(hv.begin(), hv.end());
  double area = 0;
  if (hull.size() >= 3) {
    P c{0, 0};
    for (const auto& h : hull) c.x += h.x / hull.size(), c.y += h.y / hull.size();
    std::sort(hull.begin(), hull.end(),
              [&](const P& a, const P& b) { return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x); });
    area = fan_area(hull);
  }
  const double e_c = area / (W * H);
  double mean = 0;
  std::vector<double> d;
  for (const auto& p : pts) d.push_back(std::hypot(p.x - ref.x, p.y - ref.y));
  for (double v : d) mean += v / d.size();
  double var = 0;
  for (double v : d) var += (v - mean) * (v - mean) / d.size();
  const double u = mean == 0 ? 1.0 : 1.0 / (1.0 + std::sqrt(var) / mean);
  return {e_o, e_c, u, e_o * (alpha * e_c + (1 - alpha) * u)};
}

// TF-IDF straight from term counts: tf = count/len, idf = ln(N/df).
inline double tfidf(const std::map<std::string, std::vector<int>>& docs, const std::string& doc, int term) {
  const auto& words = docs.at(doc);
  const double count = static_cast<double>(std::count(words.begin(), words.end(), term));
  if (count == 0) return 0;
  int df = 0;
  for (const auto& [_, w] : docs) df += std::find(w.begin(), w.end(), term) != w.end();
  return count / static_cast<double>(words.size()) * std::log(static_cast<double>(docs.size()) / df);
}

// Linear scan over font sizes with an independent greedy wrap.
inline int fit_font(const std::string& text, double w, double h) {
  std::vector<std::string> words;
  std::string cur;
  for (char ch : text) {
    if (ch == ' ') {
      if (!cur.empty()) words.push_back(cur), cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) words.push_back(cur);
  int best = 1;
  for (int f = 1; f <= 1000; ++f) {
    const double adv = 0.6 * f;
    int lines = 0;
    double used = -1;
    bool ok = true;
    for (const auto& word : words) {
      const double wl = adv * word.size();
      if (wl > w) ok = false;
      if (used < 0 || used + adv + wl > w + 1e-9) {
        ++lines;
        used = wl;
      } else {
        used += adv + wl;
      }
    }
    if (ok && lines * f <= h + 1e-9) best = f;
  }
  return best;
}

}  // namespace oracle
