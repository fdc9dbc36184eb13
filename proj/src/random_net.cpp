#include "nncalc/random_net.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace nncalc {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
  std::uint64_t v;
  do v = next();
  while (v >= limit);
  return v % n;
}

long SplitMix64::between(long lo, long hi) {
  return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

SplitMix64 SplitMix64::split(std::uint64_t stream) const {
  return SplitMix64(mix64(state_ ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

Rational random_rational(SplitMix64& rng, long max_num, long max_den, bool nonzero) {
  long p = rng.between(nonzero ? 1 : 0, max_num);
  long q = rng.between(1, max_den);
  Rational v(p, q);
  v.canonicalize();
  return rng.below(2) ? Rational(-v) : v;
}

RVec random_point(SplitMix64& rng, std::size_t d) {
  RVec x;
  for (std::size_t i = 0; i < d; ++i) {
    long q = rng.between(1, 16);
    Rational v(rng.between(-8 * q, 8 * q), q);
    v.canonicalize();
    x.push_back(v);
  }
  return x;
}

namespace {

Rational random_weight(SplitMix64& rng) {
  static const long dens[] = {1, 2, 4};
  Rational v(rng.between(1, 3), dens[rng.below(3)]);
  v.canonicalize();
  return rng.below(2) ? Rational(-v) : v;
}

}  // namespace

Network random_network(const RandomNetSpec& spec, SplitMix64& rng) {
  if (spec.min_L < 1 || spec.max_L < spec.min_L) throw std::invalid_argument("bad depth range");
  std::size_t L = static_cast<std::size_t>(rng.between(static_cast<long>(spec.min_L), static_cast<long>(spec.max_L)));
  std::vector<std::size_t> widths{spec.d_in};
  for (std::size_t l = 1; l < L; ++l) widths.push_back(static_cast<std::size_t>(rng.between(1, static_cast<long>(spec.max_width))));
  widths.push_back(spec.d_out);
  // Shrink hidden widths until one weight per row fits the budget.
  auto mandatory = [&] {
    std::size_t s = 0;
    for (std::size_t l = 1; l < widths.size(); ++l) s += widths[l];
    return s;
  };
  for (std::size_t l = 1; mandatory() > spec.max_W && l + 1 < widths.size(); ++l) widths[l] = 1;
  if (mandatory() > spec.max_W) throw std::invalid_argument("max_W too small for the requested depth");

  std::vector<std::set<std::pair<std::size_t, std::size_t>>> keys(L);
  std::size_t W = 0;
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t i = 0; i < widths[l + 1]; ++i) {
      keys[l].insert({i, static_cast<std::size_t>(rng.below(widths[l]))});
      ++W;
    }
  std::size_t target = static_cast<std::size_t>(rng.between(static_cast<long>(W), static_cast<long>(spec.max_W)));
  std::size_t capacity = 0;
  for (std::size_t l = 0; l < L; ++l) capacity += widths[l] * widths[l + 1];
  target = std::min(target, capacity);
  while (W < target) {
    std::size_t l = static_cast<std::size_t>(rng.below(L));
    std::pair<std::size_t, std::size_t> k{rng.below(widths[l + 1]), rng.below(widths[l])};
    if (keys[l].insert(k).second) ++W;
  }

  Network net;
  for (std::size_t l = 0; l < L; ++l) {
    std::vector<Entry> e;
    for (const auto& [i, j] : keys[l]) e.push_back({i, j, random_weight(rng)});
    RVec b;
    for (std::size_t i = 0; i < widths[l + 1]; ++i) b.push_back(rng.below(3) == 0 ? Rational(0) : random_rational(rng, 3, 4));
    std::vector<Activation> act;
    bool last = l + 1 == L;
    for (std::size_t i = 0; i < widths[l + 1]; ++i)
      act.push_back(last || rng.below(100) < spec.identity_percent ? Activation::identity() : Activation::rho(spec.r));
    net.layers.push_back({AffineMap(widths[l + 1], widths[l], std::move(e), std::move(b)), std::move(act)});
  }
  return net;
}

PiecewisePoly random_spline(SplitMix64& rng, std::size_t n, unsigned degree) {
  if (n < 1 || n > 1024) throw std::invalid_argument("random_spline needs 1 <= n <= 1024");
  std::set<long> cut;
  while (cut.size() + 1 < n) cut.insert(rng.between(1, 1023));
  RVec xs{Rational(0)};
  for (long c : cut) xs.push_back(Rational(c, 1024));
  for (auto& x : xs) x.canonicalize();
  xs.push_back(Rational(1));
  if (degree <= 1) {
    RVec ys;
    for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(Rational(rng.between(0, 64), 64));
    for (auto& y : ys) y.canonicalize();
    return linear_interpolant(xs, ys).restricted(0, 1);
  }
  std::vector<Real> br;
  std::vector<Poly> pieces{Poly()};
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    RVec c;
    for (unsigned k = 0; k <= degree; ++k) c.push_back(random_rational(rng, 4, 4));
    br.emplace_back(xs[i]);
    pieces.emplace_back(Poly(c).compose_affine(1, -xs[i]));
  }
  br.emplace_back(Rational(1));
  pieces.push_back(Poly());
  return PiecewisePoly(std::move(br), std::move(pieces));
}

}  // namespace nncalc
