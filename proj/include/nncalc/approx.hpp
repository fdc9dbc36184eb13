#pragma once

#include "nncalc/pwpoly.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nncalc {

// ---- free-knot best approximation ------------------------------------------

struct FreeKnotResult {
  // Exact L_p((0,1)) error of `approximant`, an upper bound on the best error.
  double error = 0;
  Rational error_pow_lo, error_pow_hi;  // enclosure of ∫|f−g|^p (of the sup for p = ∞)
  // DP objective over the discretized segment costs. Nonincreasing under grid
  // refinement and under n → n+1.
  double objective = 0;
  PiecewisePoly approximant;  // zero outside [0, 1)
  std::vector<Rational> knots;  // 0 = x_0 < ... < x_m = 1
  std::size_t candidates = 0;
};

// Candidate knots: the dyadic grid i·2^{−resolution} on [0, 1] plus the
// rational breakpoints of f inside (0, 1).
std::vector<Rational> knot_candidates(const PiecewisePoly& f, unsigned resolution);

// Upper-triangular matrix of per-segment costs c(i, j), i < j, stored densely
// (row-major, K×K). Finite p: discretized ∫|f−q|^p; p = ∞: discretized sup.
// The parallel and serial versions produce identical matrices.
std::vector<double> segment_costs(const PiecewisePoly& f, const std::vector<Rational>& knots, unsigned degree,
                                  double p, bool parallel);

// Approximation of f on (0, 1) by piecewise polynomials of degree ≤ degree
// with at most n pieces. p ∈ {1, 2, ∞}.
FreeKnotResult best_free_knot(const PiecewisePoly& f, std::size_t n, unsigned degree, double p,
                              unsigned resolution = 10, bool parallel = true);
// One cost matrix shared by several budgets.
std::vector<FreeKnotResult> best_free_knot(const PiecewisePoly& f, const std::vector<std::size_t>& budgets,
                                           unsigned degree, double p, unsigned resolution = 10,
                                           bool parallel = true);

// ---- moduli of smoothness and Besov lower bounds ---------------------------

// D_h^k f(x) = Σ_i C(k,i)(−1)^{k−i} f(x + ih).
PiecewisePoly finite_difference(const PiecewisePoly& f, unsigned k, const Rational& h);

// ‖D_h^k f‖_{L_p} over {x : x, x + kh ∈ [0, 1]} (closed; for p = ∞ a single
// point counts).
double difference_norm(const PiecewisePoly& f, unsigned k, const Rational& h, double p);

struct ModulusValue {
  double value = 0;
  Rational h;  // maximizing probe
};

// Lower estimate of ω_k(f)_p(t): max of difference_norm over the probes
// {2^{−m} ≤ t : m ≤ 20} ∪ {t} ∪ extra (entries > t ignored).
ModulusValue modulus(const PiecewisePoly& f, unsigned k, double p, const Rational& t,
                     const std::vector<Rational>& extra = {});

struct ModulusTable {
  unsigned k = 2;
  double p = 1;
  std::vector<std::pair<Rational, double>> samples;  // (t, estimate), nondecreasing
};

// Estimates at increasing t, each also covering the probes of smaller t.
ModulusTable modulus_table(const PiecewisePoly& f, unsigned k, double p, std::vector<Rational> ts);

// Lower bound on the Besov seminorm |f|_{B^s_{p,q}} from ω_k at t = 2^{−m},
// m = 0..20: sup_t t^{−s}ω(t) for q = ∞, otherwise the dyadic lower sum
// (ln 2 Σ_m (2^{ms} ω(2^{−m−1}))^q)^{1/q}, valid since ω is nondecreasing.
double besov_lower(const PiecewisePoly& f, double s, double p, double q, unsigned k = 2);

// ---- approximation curves ----------------------------------------------------

struct ApproxErrorCurve {
  std::string family;  // "free-knot-ppoly" or "network"
  unsigned degree = 1;  // free-knot family
  unsigned r = 1;
  std::size_t L = 0;  // network family
  double p = 1;
  std::vector<std::size_t> budgets;  // increasing
  std::vector<double> errors;        // E_n, nonincreasing
};

// E_0 = ‖f‖_{L_p(0,1)}; E_n for n ≥ 1 from best_free_knot (running minimum,
// still an upper bound since the families are nested).
ApproxErrorCurve free_knot_curve(const PiecewisePoly& f, const std::vector<std::size_t>& budgets, unsigned degree,
                                 double p, unsigned resolution = 10);

struct TruncatedNorm {
  double value = 0;
  std::size_t truncation = 0;  // largest n used
  std::size_t terms = 0;
};

// Σ_{n ≤ M} [n^α E_{n−1}]^q / n over the n with n − 1 in the curve's budgets,
// or the max of n^α E_{n−1} for q = ∞. A truncation, never a membership claim.
TruncatedNorm truncated_approx_norm(const ApproxErrorCurve& curve, double alpha, double q);

// ---- sawtooth checks ------------------------------------------------------------

struct InapproxReport {
  unsigned j = 0;
  std::size_t N = 0;
  unsigned alpha = 1;
  double p = 1;
  unsigned resolution = 10;
  double dp_error = 0;
  double bound = 0;  // 2^{−5/p}
  double margin = 0;
  bool pass = false;
};

// True iff N ≤ (2^j + 1)/(4(1 + alpha)).
bool inapprox_applicable(unsigned j, std::size_t N, unsigned alpha);
// Throws std::invalid_argument if the precondition fails.
InapproxReport sawtooth_inapprox_check(unsigned j, std::size_t N, unsigned alpha, double p, unsigned resolution = 10);
std::string inapprox_csv_header();
std::string inapprox_csv_row(const InapproxReport& r);

struct BernsteinEntry {
  std::string label;
  std::size_t pieces = 0;
  double besov = 0, lp = 0, ratio = 0;
};

struct BernsteinReport {
  double s = 0, p = 0, sigma = 0;
  std::vector<BernsteinEntry> entries;
  // Smallest n in the slope fit. Below it the dyadic sum is pre-asymptotic
  // (relative lower-order term ≈ 2^{−jσ}) and the local slope exceeds s.
  std::size_t fit_from = 32;
  double slope = 0;     // log-log slope of the sawtooth ratios with n ≥ fit_from
  double constant = 0;  // max ratio / n^s
  bool pass = false;    // slope ≤ s + 0.1
};

// Corpus per n: Δ_j when n = 2^j, and a seeded random spline with n pieces.
// ratio = besov_lower(f, s, σ, σ)/‖f‖_{L_p}, σ = (s + 1/p)^{−1}.
BernsteinReport bernstein_probe(const std::vector<std::size_t>& n_list, double s, double p, unsigned degree,
                                std::uint64_t seed = 1);

}  // namespace nncalc
