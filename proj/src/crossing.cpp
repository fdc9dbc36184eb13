#include "nncalc/crossing.hpp"

#include <algorithm>

namespace nncalc {

namespace {

const Rational kHalf(1, 2);

// Breakpoints of f and the points where a piece meets 1/2, ascending.
std::vector<Real> level_points(const PiecewisePoly& f) {
  const auto& br = f.breakpoints();
  const auto& ps = f.pieces();
  std::vector<Real> out;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Real* lo = k > 0 ? &br[k - 1] : nullptr;
    const Real* hi = k < br.size() ? &br[k] : nullptr;
    if (lo) out.push_back(*lo);
    Poly q = ps[k] - Poly::constant(kHalf);
    if (q.is_zero()) continue;
    for (auto& r : roots_between(q, lo, hi)) out.push_back(std::move(r));
  }
  return out;
}

std::vector<Real> merge_points(const std::vector<Real>& a, const std::vector<Real>& b) {
  std::vector<Real> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      out.push_back(a[i++]);
    } else if (i == a.size()) {
      out.push_back(b[j++]);
    } else {
      int c = compare(a[i], b[j]);
      if (c < 0) out.push_back(a[i++]);
      else if (c > 0) out.push_back(b[j++]);
      else {
        out.push_back(a[i++]);
        ++j;
      }
    }
  }
  return out;
}

int level_at_point(const PiecewisePoly& f, const Real& x) {
  const Poly& q = f.pieces()[f.piece_index(x)];
  return sign_at(q - Poly::constant(kHalf), x) >= 0 ? 1 : 0;
}

int level_at(const PiecewisePoly& f, const Rational& x) { return f(x) >= kHalf ? 1 : 0; }

// Atoms in order: (−∞,p0), {p0}, (p0,p1), ..., (p_{n−1},∞).
struct Atom {
  const Real* lo;
  const Real* hi;
  bool point;
};

std::vector<Atom> atoms(const std::vector<Real>& pts) {
  std::vector<Atom> out;
  out.push_back({nullptr, pts.empty() ? nullptr : &pts[0], false});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.push_back({&pts[i], &pts[i], true});
    out.push_back({&pts[i], i + 1 < pts.size() ? &pts[i + 1] : nullptr, false});
  }
  return out;
}

std::vector<int> levels(const PiecewisePoly& f, const std::vector<Atom>& at) {
  std::vector<int> lv;
  lv.reserve(at.size());
  for (const auto& a : at) lv.push_back(a.point ? level_at_point(f, *a.lo) : level_at(f, point_between(a.lo, a.hi)));
  return lv;
}

}  // namespace

CrossingProfile crossing_profile(const PiecewisePoly& f) {
  std::vector<Real> pts = level_points(f);
  auto at = atoms(pts);
  auto lv = levels(f, at);
  CrossingProfile prof;
  for (std::size_t s = 0; s < at.size();) {
    std::size_t e = s;
    while (e + 1 < at.size() && lv[e + 1] == lv[s]) ++e;
    CrossingComponent c;
    c.level = lv[s];
    if (at[s].lo) {
      c.lo = *at[s].lo;
      c.lo_closed = at[s].point;
    }
    if (at[e].hi) {
      c.hi = *at[e].hi;
      c.hi_closed = at[e].point;
    }
    prof.components.push_back(std::move(c));
    s = e + 1;
  }
  prof.crossing_number = prof.components.size();
  return prof;
}

std::size_t crossing_number(const PiecewisePoly& f) { return crossing_profile(f).crossing_number; }

Rational disagreement_fraction(const PiecewisePoly& f, const PiecewisePoly& g) {
  std::vector<Real> pts = merge_points(level_points(f), level_points(g));
  auto at = atoms(pts);
  auto lf = levels(f, at);
  auto lg = levels(g, at);
  std::size_t components = 0, disagree = 0;
  for (std::size_t s = 0; s < at.size();) {
    std::size_t e = s;
    bool all = lf[s] != lg[s];
    while (e + 1 < at.size() && lf[e + 1] == lf[s]) {
      ++e;
      all = all && lf[e] != lg[e];
    }
    ++components;
    if (all) ++disagree;
    s = e + 1;
  }
  Rational q(disagree, components);
  q.canonicalize();
  return q;
}

Rational telgarsky_bound(std::size_t cr_f, std::size_t cr_g) {
  Rational q(2 * cr_g, cr_f);
  q.canonicalize();
  return Rational(1, 2) * (1 - q);
}

}  // namespace nncalc
