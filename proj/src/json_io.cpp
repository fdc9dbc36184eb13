#include "nncalc/json_io.hpp"

#include "nncalc/custom.hpp"

#include <charconv>
#include <stdexcept>

namespace nncalc {

std::string activation_tag(const Activation& a) {
  switch (a.kind) {
    case Activation::Kind::Identity:
      return "id";
    case Activation::Kind::Rho:
      return "rho:" + std::to_string(a.param);
    case Activation::Kind::Custom:
      return "custom:" + custom_activation(a.param).name;
  }
  return "id";
}

Activation parse_activation_tag(std::string_view tag) {
  if (tag == "id") return Activation::identity();
  if (tag.substr(0, 4) == "rho:") {
    auto digits = tag.substr(4);
    unsigned r = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), r);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
      throw std::invalid_argument("bad activation tag '" + std::string(tag) + "'");
    return Activation::rho(r);
  }
  if (tag.substr(0, 7) == "custom:") {
    auto h = find_custom(std::string(tag.substr(7)));
    if (!h) throw std::invalid_argument("unregistered custom activation '" + std::string(tag.substr(7)) + "'");
    return Activation::custom(*h);
  }
  throw std::invalid_argument("bad activation tag '" + std::string(tag) + "'");
}

Json to_json(const Network& net) {
  Json layers = Json::array();
  for (const auto& layer : net.layers) {
    Json matrix = Json::array();
    for (const auto& e : layer.map.entries()) matrix.push_back(Json::array({e.row, e.col, to_string(e.value)}));
    Json bias = Json::array();
    for (const auto& b : layer.map.bias()) bias.push_back(to_string(b));
    Json act = Json::array();
    for (const auto& a : layer.act) act.push_back(activation_tag(a));
    layers.push_back({{"cols", layer.map.cols()}, {"matrix", matrix}, {"bias", bias}, {"act", act}});
  }
  return {{"format", kNetFormat}, {"layers", layers}};
}

namespace {

Rational rational_field(const Json& v) {
  if (!v.is_string()) throw std::invalid_argument("rational must be a \"p/q\" string");
  return parse_rational(v.get<std::string>());
}

std::size_t count_field(const Json& v, const char* what) {
  if (!v.is_number_unsigned()) throw std::invalid_argument(std::string(what) + " must be a nonnegative integer");
  return v.get<std::size_t>();
}

}  // namespace

Network network_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("network document must be an object");
  if (!j.contains("format") || j["format"] != kNetFormat)
    throw std::invalid_argument(std::string("missing or unsupported format (expected ") + kNetFormat + ")");
  if (!j.contains("layers") || !j["layers"].is_array()) throw std::invalid_argument("missing layers array");
  Network net;
  std::size_t prev_rows = 0;
  for (const auto& jl : j["layers"]) {
    if (!jl.is_object() || !jl.contains("matrix") || !jl.contains("bias") || !jl.contains("act"))
      throw std::invalid_argument("layer needs matrix, bias and act");
    RVec bias;
    for (const auto& b : jl["bias"]) bias.push_back(rational_field(b));
    std::size_t cols = jl.contains("cols") ? count_field(jl["cols"], "cols") : prev_rows;
    std::vector<Entry> entries;
    for (const auto& e : jl["matrix"]) {
      if (!e.is_array() || e.size() != 3) throw std::invalid_argument("matrix entry must be [row, col, \"p/q\"]");
      entries.push_back({count_field(e[0], "row"), count_field(e[1], "col"), rational_field(e[2])});
    }
    std::vector<Activation> act;
    for (const auto& a : jl["act"]) {
      if (!a.is_string()) throw std::invalid_argument("activation tag must be a string");
      act.push_back(parse_activation_tag(a.get<std::string>()));
    }
    std::size_t rows = bias.size();
    net.layers.push_back({AffineMap(rows, cols, std::move(entries), std::move(bias)), std::move(act)});
    prev_rows = rows;
  }
  return net;
}

std::string dump_network(const Network& net) { return to_json(net).dump(1) + "\n"; }

Network parse_network(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  return network_from_json(j);
}

}  // namespace nncalc
