#include "nncalc/calculus.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace nncalc {

Network deepen(const Network& net, std::size_t L0) {
  require_valid(net);
  if (L0 == 0) return net;
  Network out = net;
  std::size_t d = net.d_in(), k = net.d_out();
  if (k <= d) {
    for (std::size_t i = 0; i < L0; ++i) out.layers.push_back({AffineMap::identity(k), std::vector<Activation>(k)});
  } else {
    std::vector<Layer> pre(L0, Layer{AffineMap::identity(d), std::vector<Activation>(d)});
    out.layers.insert(out.layers.begin(), pre.begin(), pre.end());
  }
  return out;
}

Network scale(const Network& net, const Rational& a) {
  require_valid(net);
  Network out = net;
  out.layers.back().map = out.layers.back().map.scaled(a);
  return out;
}

namespace {

std::vector<Activation> concat(const std::vector<Activation>& a, const std::vector<Activation>& b) {
  std::vector<Activation> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Equal depth, shared input, outputs concatenated.
Network parallel(const Network& a, const Network& b) {
  Network out;
  for (std::size_t l = 0; l < a.depth(); ++l) {
    const auto& la = a.layers[l];
    const auto& lb = b.layers[l];
    AffineMap m = l == 0 ? vstack({&la.map, &lb.map}) : block_diag({&la.map, &lb.map});
    out.layers.push_back({std::move(m), concat(la.act, lb.act)});
  }
  return out;
}

std::vector<std::size_t> depth_order(const std::vector<Network>& nets) {
  std::vector<std::size_t> order(nets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return nets[i].depth() < nets[j].depth(); });
  return order;
}

}  // namespace

Network cartesian(const std::vector<Network>& nets) {
  if (nets.empty()) throw std::invalid_argument("cartesian needs at least one network");
  for (const auto& n : nets) require_valid(n);
  for (const auto& n : nets)
    if (n.d_in() != nets[0].d_in()) throw std::invalid_argument("cartesian needs a shared input dimension");
  if (nets.size() == 1) return nets[0];
  auto order = depth_order(nets);
  Network acc = nets[order[0]];
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Network& next = nets[order[i]];
    acc = parallel(deepen(acc, next.depth() - acc.depth()), next);
  }
  // Output block of nets[order[i]] starts at offset[i]; restore input order.
  std::vector<std::size_t> start(nets.size());
  std::size_t off = 0;
  for (auto idx : order) {
    start[idx] = off;
    off += nets[idx].d_out();
  }
  std::vector<std::size_t> perm;
  for (std::size_t idx = 0; idx < nets.size(); ++idx)
    for (std::size_t j = 0; j < nets[idx].d_out(); ++j) perm.push_back(start[idx] + j);
  auto& last = acc.layers.back();
  last.map = last.map.select_rows(perm);
  return acc;
}

Network block_parallel(const std::vector<Network>& nets) {
  if (nets.empty()) throw std::invalid_argument("block_parallel needs at least one network");
  std::size_t depth = 0;
  for (const auto& n : nets) {
    require_valid(n);
    depth = std::max(depth, n.depth());
  }
  std::vector<Network> deep;
  for (const auto& n : nets) deep.push_back(deepen(n, depth - n.depth()));
  Network out;
  for (std::size_t l = 0; l < depth; ++l) {
    std::vector<const AffineMap*> maps;
    std::vector<Activation> act;
    for (const auto& n : deep) {
      maps.push_back(&n.layers[l].map);
      act.insert(act.end(), n.layers[l].act.begin(), n.layers[l].act.end());
    }
    out.layers.push_back({block_diag(maps), std::move(act)});
  }
  return out;
}

Network sum(const std::vector<Network>& nets) {
  if (nets.empty()) throw std::invalid_argument("sum needs at least one network");
  for (const auto& n : nets) require_valid(n);
  for (const auto& n : nets)
    if (n.d_in() != nets[0].d_in() || n.d_out() != nets[0].d_out())
      throw std::invalid_argument("sum needs matching input and output dimensions");
  auto order = depth_order(nets);
  Network acc = nets[order[0]];
  std::size_t k = acc.d_out();
  AffineMap id = AffineMap::identity(k);
  AffineMap adder = hsum({&id, &id});
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Network& next = nets[order[i]];
    acc = parallel(deepen(acc, next.depth() - acc.depth()), next);
    auto& last = acc.layers.back();
    last.map = compose(adder, last.map);
    last.act.assign(k, Activation::identity());
  }
  return acc;
}

Network pre_post_affine(const Network& net, const AffineMap& P, const AffineMap& Q) {
  require_valid(net);
  if (P.rows() != net.d_in() || Q.cols() != net.d_out())
    throw std::invalid_argument("pre/post maps do not chain with the network");
  if (Q.l0() == 0) return constant_network(Q.bias(), P.cols());
  Network out = net;
  out.layers.front().map = compose(out.layers.front().map, P);
  out.layers.back().map = compose(Q, out.layers.back().map);
  out.layers.back().act.assign(Q.rows(), Activation::identity());
  return out;
}

Network compose_stacked(const Network& f, const Network& g) {
  require_valid(f);
  require_valid(g);
  if (f.d_out() != g.d_in()) throw std::invalid_argument("compose: d_out(f) != d_in(g)");
  Network out = f;
  out.layers.insert(out.layers.end(), g.layers.begin(), g.layers.end());
  return out;
}

Network compose_fused(const Network& f, const Network& g) {
  require_valid(f);
  require_valid(g);
  if (f.d_out() != g.d_in()) throw std::invalid_argument("compose: d_out(f) != d_in(g)");
  Network out;
  out.layers.assign(f.layers.begin(), f.layers.end() - 1);
  out.layers.push_back({compose(g.layers.front().map, f.layers.back().map), g.layers.front().act});
  out.layers.insert(out.layers.end(), g.layers.begin() + 1, g.layers.end());
  return out;
}

}  // namespace nncalc
