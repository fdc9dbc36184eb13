#include "nncalc/approx.hpp"

#include "nncalc/norms.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nncalc {

namespace {

constexpr int kNodes = 129;
constexpr unsigned kMaxResolution = 12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Double view of a piecewise polynomial for the fitting phase.
struct FastPw {
  std::vector<double> breaks;
  std::vector<std::vector<double>> coeffs;

  explicit FastPw(const PiecewisePoly& f) {
    for (const auto& b : f.breakpoints()) breaks.push_back(b.to_double());
    for (const auto& q : f.pieces()) {
      std::vector<double> c;
      for (const auto& v : q.coeffs()) c.push_back(v.get_d());
      coeffs.push_back(std::move(c));
    }
  }
  static double horner(const std::vector<double>& c, double x) {
    double v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }
  std::size_t index(double x) const {
    return static_cast<std::size_t>(std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
  }
  // Value at x; `left` takes the left limit at a breakpoint.
  double eval(double x, bool left = false) const {
    std::size_t k = index(x);
    if (left && k > 0 && breaks[k - 1] == x) --k;
    return horner(coeffs[k], x);
  }
};

struct Nodes {
  std::vector<double> t, w;  // Chebyshev–Lobatto nodes on [0, 1], Clenshaw–Curtis weights (sum 1)
  Nodes() {
    const int n = kNodes - 1;
    for (int k = 0; k <= n; ++k) {
      t.push_back((1 - std::cos(M_PI * k / n)) / 2);
      double s = 0;
      for (int j = 1; j <= n / 2; ++j) {
        double b = (j == n / 2) ? 1 : 2;
        s += b / (4.0 * j * j - 1) * std::cos(2 * M_PI * j * k / n);
      }
      double c = (k == 0 || k == n) ? 1 : 2;
      w.push_back(c / n * (1 - s) / 2);
    }
  }
};

const Nodes& nodes() {
  static const Nodes n;
  return n;
}

using Coeffs = std::vector<double>;  // polynomial in the local variable t ∈ [0, 1]

double eval_local(const Coeffs& c, double t) { return FastPw::horner(c, t); }

// Dense least squares via normal equations with partial pivoting.
Coeffs weighted_ls(const std::vector<double>& t, const std::vector<double>& y, const std::vector<double>& w,
                   unsigned deg) {
  std::size_t n = deg + 1;
  std::vector<double> A(n * n, 0), rhs(n, 0), pw(2 * n - 1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    pw[0] = 1;
    for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * t[i];
    for (std::size_t r = 0; r < n; ++r) {
      rhs[r] += w[i] * y[i] * pw[r];
      for (std::size_t c = 0; c < n; ++c) A[r * n + c] += w[i] * pw[r + c];
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(A[r * n + col]) > std::fabs(A[piv * n + col])) piv = r;
    if (A[piv * n + col] == 0) continue;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
      std::swap(rhs[col], rhs[piv]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = A[r * n + col] / A[col * n + col];
      if (f == 0) continue;
      for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
      rhs[r] -= f * rhs[col];
    }
  }
  Coeffs out(n, 0);
  for (std::size_t r = 0; r < n; ++r) out[r] = A[r * n + r] == 0 ? 0 : rhs[r] / A[r * n + r];
  return out;
}

struct Weighted {
  double v, w;
  std::size_t idx;
};

// Lower weighted median (in-place three-way quickselect); returns the index
// of an element holding the median value, the smallest such index on ties.
std::size_t weighted_median(std::vector<Weighted>& a) {
  double total = 0;
  for (const auto& e : a) total += e.w;
  double below = 0;
  std::size_t lo = 0, hi = a.size();
  while (true) {
    if (hi - lo == 1) return a[lo].idx;
    double x = a[lo].v, y = a[lo + (hi - lo) / 2].v, z = a[hi - 1].v;
    double pivot = std::max(std::min(x, y), std::min(std::max(x, y), z));
    // [lo, lt) < pivot, [lt, i) == pivot, [gt, hi) > pivot
    std::size_t lt = lo, i = lo, gt = hi;
    while (i < gt) {
      if (a[i].v < pivot) std::swap(a[lt++], a[i++]);
      else if (a[i].v > pivot) std::swap(a[i], a[--gt]);
      else ++i;
    }
    double wl = 0, we = 0;
    for (std::size_t k = lo; k < lt; ++k) wl += a[k].w;
    for (std::size_t k = lt; k < gt; ++k) we += a[k].w;
    if (lt > lo && 2 * (below + wl) >= total) {
      hi = lt;
    } else if (2 * (below + wl + we) >= total || gt == hi) {
      std::size_t best = a[lt].idx;
      for (std::size_t k = lt; k < gt; ++k) best = std::min(best, a[k].idx);
      return best;
    } else {
      below += wl + we;
      lo = gt;
    }
  }
}

double lad_objective(const std::vector<double>& t, const std::vector<double>& y, const std::vector<double>& w,
                     const Coeffs& c) {
  double s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) s += w[i] * std::fabs(y[i] - eval_local(c, t[i]));
  return s;
}

// Weighted least absolute deviations.
Coeffs fit_lad(const std::vector<double>& t, const std::vector<double>& y, const std::vector<double>& w, unsigned deg) {
  std::vector<Weighted> buf;
  if (deg == 0) {
    for (std::size_t i = 0; i < t.size(); ++i) buf.push_back({y[i], w[i], i});
    return {y[weighted_median(buf)]};
  }
  if (deg == 1) {
    // Direct descent: the best line through pivot k has the weighted-median
    // slope; move the pivot to the point realizing it until no improvement.
    // Start from the node closest to the least-squares line.
    Coeffs ls = weighted_ls(t, y, w, 1);
    std::size_t k = 0;
    for (std::size_t i = 1; i < t.size(); ++i)
      if (std::fabs(y[i] - eval_local(ls, t[i])) < std::fabs(y[k] - eval_local(ls, t[k]))) k = i;
    Coeffs best{y[k], 0};
    double best_obj = lad_objective(t, y, w, best);
    std::vector<double> slope(t.size());
    for (int iter = 0; iter < 64; ++iter) {
      buf.clear();
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == t[k]) continue;
        slope[i] = (y[i] - y[k]) / (t[i] - t[k]);
        buf.push_back({slope[i], w[i] * std::fabs(t[i] - t[k]), i});
      }
      if (buf.empty()) break;
      std::size_t m = weighted_median(buf);
      Coeffs cand{y[k] - slope[m] * t[k], slope[m]};
      double obj = lad_objective(t, y, w, cand);
      if (!(obj < best_obj)) break;
      best = cand;
      best_obj = obj;
      k = m;
    }
    return best;
  }
  // Iteratively reweighted least squares.
  Coeffs c = weighted_ls(t, y, w, deg);
  std::vector<double> v(t.size());
  for (int iter = 0; iter < 60; ++iter) {
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = w[i] / std::max(std::fabs(y[i] - eval_local(c, t[i])), 1e-14);
    c = weighted_ls(t, y, v, deg);
  }
  return c;
}

double max_abs_residual(const std::vector<double>& t, const std::vector<double>& y, const Coeffs& c) {
  double m = 0;
  for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, std::fabs(y[i] - eval_local(c, t[i])));
  return m;
}

// Discrete minimax fit on points sorted by t.
Coeffs fit_minimax(const std::vector<double>& t, const std::vector<double>& y, unsigned deg) {
  if (deg == 0) {
    auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    return {(*lo + *hi) / 2};
  }
  if (deg == 1) {
    // g(a) = max(y − a t) − min(y − a t) is convex and piecewise linear with
    // kinks at slopes of convex hull edges.
    auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
      return (t[a] - t[o]) * (y[b] - y[o]) - (y[a] - y[o]) * (t[b] - t[o]);
    };
    std::vector<std::size_t> lower, upper;
    for (std::size_t i = 0; i < t.size(); ++i) {
      while (lower.size() >= 2 && cross(lower[lower.size() - 2], lower.back(), i) <= 0) lower.pop_back();
      lower.push_back(i);
      while (upper.size() >= 2 && cross(upper[upper.size() - 2], upper.back(), i) >= 0) upper.pop_back();
      upper.push_back(i);
    }
    std::vector<double> slopes;
    for (const auto* hull : {&lower, &upper})
      for (std::size_t i = 0; i + 1 < hull->size(); ++i) {
        std::size_t a = (*hull)[i], b = (*hull)[i + 1];
        if (t[b] > t[a]) slopes.push_back((y[b] - y[a]) / (t[b] - t[a]));
      }
    if (slopes.empty()) return fit_minimax(t, y, 0);
    std::sort(slopes.begin(), slopes.end());
    auto spread = [&](double a, double& mid) {
      double hi = -kInf, lo = kInf;
      for (std::size_t i = 0; i < t.size(); ++i) {
        double v = y[i] - a * t[i];
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
      mid = (hi + lo) / 2;
      return hi - lo;
    };
    std::size_t lo = 0, hi = slopes.size() - 1;
    double mid;
    while (lo < hi) {
      std::size_t m = (lo + hi) / 2;
      if (spread(slopes[m], mid) <= spread(slopes[m + 1], mid)) hi = m;
      else lo = m + 1;
    }
    spread(slopes[lo], mid);
    return {mid, slopes[lo]};
  }
  // Lawson's iteration.
  std::vector<double> v(t.size(), 1.0 / t.size());
  Coeffs c = weighted_ls(t, y, v, deg), best = c;
  double best_err = max_abs_residual(t, y, c);
  for (int iter = 0; iter < 100; ++iter) {
    double total = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      v[i] *= std::fabs(y[i] - eval_local(c, t[i]));
      total += v[i];
    }
    if (!(total > 0)) break;
    for (auto& x : v) x /= total;
    c = weighted_ls(t, y, v, deg);
    double e = max_abs_residual(t, y, c);
    if (e < best_err) {
      best_err = e;
      best = c;
    }
  }
  return best;
}

class SegmentFitter {
 public:
  SegmentFitter(const PiecewisePoly& f, const std::vector<Rational>& knots, unsigned degree, double p)
      : fast_(f), degree_(degree), p_(p) {
    if (!(p == 1 || p == 2 || std::isinf(p))) throw std::invalid_argument("best_free_knot supports p in {1, 2, inf}");
    for (const auto& k : knots) {
      x_.push_back(k.get_d());
      std::size_t idx = f.piece_index(k);
      right_.push_back(idx);
      bool on_break = idx > 0 && compare(f.breakpoints()[idx - 1], Real(k)) == 0;
      left_.push_back(on_break ? idx - 1 : idx);
    }
    for (const auto& q : f.pieces()) piece_fits_.push_back(q.degree() <= static_cast<int>(degree));
  }

  // Exactly representable on [x_i, x_j]: a single piece of low degree.
  bool exact(std::size_t i, std::size_t j) const { return right_[i] == left_[j] && piece_fits_[right_[i]]; }
  std::size_t piece(std::size_t i) const { return right_[i]; }

  // Discretized cost and the local fit.
  double cost(std::size_t i, std::size_t j, Coeffs* fit = nullptr) const {
    if (exact(i, j)) {
      if (fit) fit->clear();
      return 0;
    }
    double a = x_[i], b = x_[j], len = b - a;
    const Nodes& nd = nodes();
    std::vector<double> t, y, w;
    if (std::isinf(p_)) {
      // Chebyshev nodes merged with the interior breakpoints.
      std::size_t lo = fast_.index(a), hi = fast_.index(b);
      std::vector<double> inner;
      for (std::size_t k = lo; k < hi && k < fast_.breaks.size(); ++k)
        if (fast_.breaks[k] > a && fast_.breaks[k] < b) inner.push_back((fast_.breaks[k] - a) / len);
      std::merge(nd.t.begin(), nd.t.end(), inner.begin(), inner.end(), std::back_inserter(t));
    } else {
      t = nd.t;
      w = nd.w;
    }
    y.resize(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) y[k] = fast_.eval(a + len * t[k], t[k] == 1);

    Coeffs c;
    double cost = 0;
    if (std::isinf(p_)) {
      c = fit_minimax(t, y, degree_);
      cost = max_abs_residual(t, y, c);
    } else if (p_ == 1) {
      c = fit_lad(t, y, w, degree_);
      cost = len * l1_residual(a, b, c);
    } else {
      c = l2_fit(a, b);
      cost = len * l2_residual(a, b, c);
    }
    if (fit) *fit = std::move(c);
    return cost;
  }

 private:
  template <class F>
  void for_piece_spans(double a, double b, F&& fn) const {
    std::size_t k = fast_.index(a);
    double lo = a;
    while (true) {
      double hi = k < fast_.breaks.size() ? std::min(b, fast_.breaks[k]) : b;
      if (hi > lo) fn(fast_.coeffs[k], lo, hi);
      if (hi >= b) break;
      lo = hi;
      ++k;
    }
  }

  // Normal equations in t: Hilbert Gram matrix, moments by Gauss–Legendre.
  Coeffs l2_fit(double a, double b) const {
    using GL = boost::math::quadrature::gauss<double, 30>;
    double len = b - a;
    std::vector<double> tt, yy, ww;
    for_piece_spans(a, b, [&](const std::vector<double>& c, double lo, double hi) {
      double u = (lo - a) / len, v = (hi - a) / len, half = (v - u) / 2, mid = (u + v) / 2;
      auto push = [&](double z, double weight) {
        double t = mid + half * z;
        tt.push_back(t);
        yy.push_back(FastPw::horner(c, a + len * t));
        ww.push_back(weight * half);
      };
      const auto& ab = GL::abscissa();
      const auto& wt = GL::weights();
      for (std::size_t k = 0; k < ab.size(); ++k) {
        push(ab[k], wt[k]);
        if (ab[k] != 0) push(-ab[k], wt[k]);
      }
    });
    return weighted_ls(tt, yy, ww, degree_);
  }

  // ∫_0^1 |f(a + len t) − q(t)| dt: exact for affine differences, Gauss–Legendre otherwise.
  double l1_residual(double a, double b, const Coeffs& q) const {
    using GL = boost::math::quadrature::gauss<double, 30>;
    double len = b - a, total = 0;
    for_piece_spans(a, b, [&](const std::vector<double>& c, double lo, double hi) {
      double u = (lo - a) / len, v = (hi - a) / len;
      auto d = [&](double t) { return FastPw::horner(c, a + len * t) - eval_local(q, t); };
      if (c.size() <= 2 && q.size() <= 2) {
        double d0 = d(u), d1 = d(v), s0 = std::fabs(d0), s1 = std::fabs(d1);
        if ((d0 >= 0) == (d1 >= 0) || s0 + s1 == 0) total += (s0 + s1) / 2 * (v - u);
        else total += (d0 * d0 + d1 * d1) / (2 * (s0 + s1)) * (v - u);
        return;
      }
      double half = (v - u) / 2, mid = (u + v) / 2;
      const auto& ab = GL::abscissa();
      const auto& wt = GL::weights();
      for (std::size_t k = 0; k < ab.size(); ++k)
        total += wt[k] * half * (std::fabs(d(mid + half * ab[k])) + (ab[k] == 0 ? 0 : std::fabs(d(mid - half * ab[k]))));
    });
    return total;
  }

  double l2_residual(double a, double b, const Coeffs& q) const {
    using GL = boost::math::quadrature::gauss<double, 30>;
    double len = b - a, total = 0;
    for_piece_spans(a, b, [&](const std::vector<double>& c, double lo, double hi) {
      double u = (lo - a) / len, v = (hi - a) / len, half = (v - u) / 2, mid = (u + v) / 2;
      const auto& ab = GL::abscissa();
      const auto& wt = GL::weights();
      for (std::size_t k = 0; k < ab.size(); ++k)
        for (double z : {ab[k], -ab[k]}) {
          if (z == -ab[k] && ab[k] == 0) continue;
          double t = mid + half * z;
          double r = FastPw::horner(c, a + len * t) - eval_local(q, t);
          total += wt[k] * half * r * r;
        }
    });
    return total;
  }

  FastPw fast_;
  unsigned degree_;
  double p_;
  std::vector<double> x_;
  std::vector<std::size_t> left_, right_;
  std::vector<bool> piece_fits_;
};

// Exact L2 projection onto polynomials of degree ≤ deg on [a, b].
Poly exact_l2_fit(const PiecewisePoly& f, const Rational& a, const Rational& b, unsigned deg) {
  std::size_t n = deg + 1;
  std::vector<RVec> A(n, RVec(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      unsigned e = static_cast<unsigned>(r + c + 1);
      A[r][c] = (pow(b, e) - pow(a, e)) / Rational(e);
    }
    std::vector<Poly> moved;
    for (const auto& q : f.pieces()) moved.push_back(q * Poly::monomial(static_cast<unsigned>(r)));
    RInterval m = integral(PiecewisePoly(f.breakpoints(), moved), a, b);
    A[r][n] = m.mid();
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) continue;
    std::swap(A[piv], A[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col] == 0) continue;
      Rational fct = A[r][col] / A[col][col];
      for (std::size_t c = col; c <= n; ++c) A[r][c] -= fct * A[col][c];
    }
  }
  RVec coeffs(n);
  for (std::size_t r = 0; r < n; ++r) coeffs[r] = A[r][r] == 0 ? Rational(0) : Rational(A[r][n] / A[r][r]);
  return Poly(coeffs);
}

Poly from_local(const Coeffs& c, const Rational& a, const Rational& b) {
  RVec q;
  for (double v : c) q.push_back(from_double(v));
  Rational len = b - a;
  return Poly(q).compose_affine(1 / len, -a / len);
}

double combine(double acc, double c, double p) { return std::isinf(p) ? std::max(acc, c) : acc + c; }

}  // namespace

std::vector<Rational> knot_candidates(const PiecewisePoly& f, unsigned resolution) {
  if (resolution > kMaxResolution) throw std::invalid_argument("resolution above 12 is not supported");
  std::vector<Rational> out;
  Integer cells = Integer(1) << resolution;
  for (Integer i = 0; i <= cells; ++i) out.emplace_back(Rational(i, cells));
  for (auto& q : out) q.canonicalize();
  for (const auto& b : f.breakpoints())
    if (b.is_rational() && b.rational() > 0 && b.rational() < 1) out.push_back(b.rational());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> segment_costs(const PiecewisePoly& f, const std::vector<Rational>& knots, unsigned degree,
                                  double p, bool parallel) {
  SegmentFitter fitter(f, knots, degree, p);
  const std::size_t K = knots.size();
  std::vector<double> c(K * K, kInf);
  const long rows = static_cast<long>(K);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < rows; ++i)
      for (std::size_t j = i + 1; j < K; ++j) c[i * K + j] = fitter.cost(i, j);
  } else {
    for (long i = 0; i < rows; ++i)
      for (std::size_t j = i + 1; j < K; ++j) c[i * K + j] = fitter.cost(i, j);
  }
  return c;
}

std::vector<FreeKnotResult> best_free_knot(const PiecewisePoly& f, const std::vector<std::size_t>& budgets,
                                           unsigned degree, double p, unsigned resolution, bool parallel) {
  if (budgets.empty()) return {};
  std::size_t nmax = *std::max_element(budgets.begin(), budgets.end());
  if (*std::min_element(budgets.begin(), budgets.end()) < 1) throw std::invalid_argument("n must be at least 1");
  std::vector<Rational> knots = knot_candidates(f, resolution);
  const std::size_t K = knots.size();
  if ((std::size_t(1) << resolution) < nmax)
    throw std::invalid_argument("resolution too coarse: fewer grid cells than pieces");
  std::vector<double> cost = segment_costs(f, knots, degree, p, parallel);

  // dp[k][j]: best objective covering [x_0, x_j] with exactly k segments.
  std::size_t kmax = std::min(nmax, K - 1);
  std::vector<std::vector<double>> dp(kmax + 1, std::vector<double>(K, kInf));
  std::vector<std::vector<std::size_t>> arg(kmax + 1, std::vector<std::size_t>(K, 0));
  dp[0][0] = 0;
  for (std::size_t k = 1; k <= kmax; ++k)
    for (std::size_t j = 1; j < K; ++j)
      for (std::size_t i = k - 1; i < j; ++i) {
        if (dp[k - 1][i] == kInf) continue;
        double v = combine(dp[k - 1][i], cost[i * K + j], p);
        if (v < dp[k][j]) {
          dp[k][j] = v;
          arg[k][j] = i;
        }
      }

  SegmentFitter fitter(f, knots, degree, p);
  std::vector<FreeKnotResult> out;
  for (std::size_t n : budgets) {
    std::size_t best_k = 1;
    for (std::size_t k = 1; k <= std::min(n, kmax); ++k)
      if (dp[k][K - 1] < dp[best_k][K - 1]) best_k = k;
    std::vector<std::size_t> path{K - 1};
    for (std::size_t k = best_k, j = K - 1; k > 0; --k) {
      j = arg[k][j];
      path.push_back(j);
    }
    std::reverse(path.begin(), path.end());

    FreeKnotResult res;
    res.candidates = K;
    double obj = dp[best_k][K - 1];
    res.objective = std::isinf(p) ? obj : std::pow(obj, 1.0 / p);
    std::vector<Real> br;
    std::vector<Poly> pieces{Poly()};
    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
      std::size_t i = path[s], j = path[s + 1];
      const Rational &a = knots[i], &b = knots[j];
      Poly q;
      Coeffs local;
      if (fitter.exact(i, j)) q = f.pieces()[fitter.piece(i)];
      else if (p == 2) q = exact_l2_fit(f, a, b, degree);
      else {
        fitter.cost(i, j, &local);
        q = from_local(local, a, b);
      }
      br.emplace_back(a);
      pieces.push_back(std::move(q));
    }
    br.emplace_back(Rational(1));
    pieces.push_back(Poly());
    for (std::size_t i : path) res.knots.push_back(knots[i]);
    res.approximant = PiecewisePoly(std::move(br), std::move(pieces));
    NormValue e = lp_distance(f, res.approximant, p, 0, 1);
    res.error = e.value;
    res.error_pow_lo = e.lo;
    res.error_pow_hi = e.hi;
    out.push_back(std::move(res));
  }
  return out;
}

FreeKnotResult best_free_knot(const PiecewisePoly& f, std::size_t n, unsigned degree, double p, unsigned resolution,
                              bool parallel) {
  return std::move(best_free_knot(f, std::vector<std::size_t>{n}, degree, p, resolution, parallel).front());
}

}  // namespace nncalc
