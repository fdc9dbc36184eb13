#include "nncalc/network.hpp"

#include "nncalc/custom.hpp"

#include <optional>
#include <sstream>

namespace nncalc {

std::vector<std::size_t> Network::widths() const {
  std::vector<std::size_t> w;
  if (layers.empty()) return w;
  w.push_back(d_in());
  for (const auto& l : layers) w.push_back(l.map.rows());
  return w;
}

std::vector<Diagnostic> validate(const Network& net) {
  std::vector<Diagnostic> out;
  if (net.layers.empty()) {
    out.push_back({0, "network has no layers"});
    return out;
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    const auto& m = layer.map;
    if (m.bias().size() != m.rows())
      out.push_back({l, "bias length " + std::to_string(m.bias().size()) + " != rows " + std::to_string(m.rows())});
    if (layer.act.size() != m.rows())
      out.push_back({l, "activation count " + std::to_string(layer.act.size()) + " != rows " +
                            std::to_string(m.rows())});
    if (m.rows() == 0) out.push_back({l, "layer has no neurons"});
    if (l > 0 && m.cols() != net.layers[l - 1].map.rows())
      out.push_back({l, "input dimension " + std::to_string(m.cols()) + " != previous output " +
                            std::to_string(net.layers[l - 1].map.rows())});
    if (l == 0 && m.cols() == 0) out.push_back({l, "input dimension is zero"});
    bool last = l + 1 == net.layers.size();
    for (std::size_t i = 0; i < layer.act.size(); ++i) {
      const auto& a = layer.act[i];
      if (last && !a.is_identity())
        out.push_back({l, "output neuron " + std::to_string(i) + " must use the identity"});
      if (a.is_rho() && a.param == 0) out.push_back({l, "neuron " + std::to_string(i) + " has rho degree 0"});
      if (a.is_custom() && !custom_registered(a.param))
        out.push_back({l, "neuron " + std::to_string(i) + " uses unknown custom activation " +
                              std::to_string(a.param)});
    }
  }
  return out;
}

void require_valid(const Network& net) {
  auto diags = validate(net);
  if (diags.empty()) return;
  std::ostringstream os;
  os << "invalid network:";
  for (const auto& d : diags) os << " [layer " << d.layer << "] " << d.message << ";";
  throw std::invalid_argument(os.str());
}

ComplexityReport complexity(const Network& net) {
  ComplexityReport rep;
  rep.L = net.depth();
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& m = net.layers[l].map;
    rep.W += m.l0();
    rep.W0 += m.l0() + m.bias_nnz();
    if (l + 1 < net.layers.size()) rep.N += m.rows();
    rep.per_layer.push_back({m.l0(), m.l0_col_max(), m.l0_row_max()});
  }
  return rep;
}

bool is_strict(const Network& net) {
  if (net.layers.empty()) return false;
  std::optional<unsigned> r;
  for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
    for (const auto& a : net.layers[l].act) {
      if (!a.is_rho()) return false;
      if (r && *r != a.param) return false;
      r = a.param;
    }
  }
  for (const auto& a : net.layers.back().act)
    if (!a.is_identity()) return false;
  return true;
}

unsigned rho_degree(const Network& net) {
  unsigned r = 0;
  for (const auto& layer : net.layers)
    for (const auto& a : layer.act) {
      if (!a.is_rho()) continue;
      if (r != 0 && r != a.param)
        throw std::invalid_argument("network mixes rho degrees " + std::to_string(r) + " and " +
                                    std::to_string(a.param));
      r = a.param;
    }
  return r;
}

bool has_custom(const Network& net) {
  for (const auto& layer : net.layers)
    for (const auto& a : layer.act)
      if (a.is_custom()) return true;
  return false;
}

Rational apply_activation(const Activation& a, const Rational& z) {
  switch (a.kind) {
    case Activation::Kind::Identity:
      return z;
    case Activation::Kind::Rho:
      return rho(z, a.param);
    case Activation::Kind::Custom: {
      const auto& c = custom_activation(a.param);
      if (!c.exact) throw ExactEvaluationUnavailable();
      return c.exact(z);
    }
  }
  return z;
}

std::vector<RVec> evaluate_trace(const Network& net, const RVec& x) {
  require_valid(net);
  if (x.size() != net.d_in())
    throw std::invalid_argument("input has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(net.d_in()));
  std::vector<RVec> trace;
  trace.reserve(net.depth() + 1);
  trace.push_back(x);
  for (const auto& layer : net.layers) {
    RVec z = layer.map.apply(trace.back());
    for (std::size_t i = 0; i < z.size(); ++i)
      if (!layer.act[i].is_identity()) z[i] = apply_activation(layer.act[i], z[i]);
    trace.push_back(std::move(z));
  }
  return trace;
}

RVec evaluate(const Network& net, const RVec& x) { return std::move(evaluate_trace(net, x).back()); }

Network constant_network(const RVec& c, std::size_t d) {
  if (d == 0) throw std::invalid_argument("constant network needs input dimension >= 1");
  if (c.empty()) throw std::invalid_argument("constant network needs output dimension >= 1");
  Network net;
  net.layers.push_back({AffineMap(c.size(), d, {}, c), std::vector<Activation>(c.size())});
  return net;
}

Network affine_network(const AffineMap& map) {
  Network net;
  net.layers.push_back({map, std::vector<Activation>(map.rows())});
  require_valid(net);
  return net;
}

namespace {

bool has_empty_map(const Network& net) {
  for (const auto& l : net.layers)
    if (l.map.l0() == 0) return true;
  return false;
}

Network collapse(const Network& net) {
  return constant_network(evaluate(net, RVec(net.d_in(), Rational(0))), net.d_in());
}

}  // namespace

Network compress(const Network& net) {
  require_valid(net);
  if (has_empty_map(net)) return collapse(net);
  Network out = net;
  // Removing dead neurons of layer l only deletes columns of layer l+1, so one
  // upward sweep reaches the fixed point.
  for (std::size_t l = 0; l + 1 < out.layers.size(); ++l) {
    auto& cur = out.layers[l];
    auto& next = out.layers[l + 1];
    std::vector<std::size_t> keep;
    RVec bias = next.map.bias();
    for (std::size_t i = 0; i < cur.map.rows(); ++i) {
      if (!cur.map.row_is_zero(i)) {
        keep.push_back(i);
        continue;
      }
      Rational v = apply_activation(cur.act[i], cur.map.bias()[i]);
      if (v == 0) continue;
      for (std::size_t r = 0; r < next.map.rows(); ++r) {
        Rational w = next.map.at(r, i);
        if (w != 0) bias[r] += w * v;
      }
    }
    if (keep.size() == cur.map.rows()) continue;
    if (keep.empty()) return collapse(net);
    std::vector<Activation> act;
    for (auto i : keep) act.push_back(cur.act[i]);
    cur.map = cur.map.select_rows(keep);
    cur.act = std::move(act);
    next.map = next.map.select_cols(keep).with_bias(std::move(bias));
    if (next.map.l0() == 0) return collapse(net);
  }
  return out;
}

}  // namespace nncalc
