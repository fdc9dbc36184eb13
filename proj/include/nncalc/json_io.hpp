#pragma once

#include "nncalc/network.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace nncalc {

using Json = nlohmann::json;

inline constexpr const char* kNetFormat = "nncalc-net-v1";

// {"format":"nncalc-net-v1","layers":[{"cols":c,"matrix":[[r,c,"p/q"],...],
//  "bias":["p/q",...],"act":["id"|"rho:r"|"custom:name",...]},...]}
Json to_json(const Network& net);
// Accepts any structurally well-formed document (validate() separately);
// throws std::invalid_argument on malformed input.
Network network_from_json(const Json& j);

std::string dump_network(const Network& net);
Network parse_network(std::string_view text);

std::string activation_tag(const Activation& a);
Activation parse_activation_tag(std::string_view tag);

}  // namespace nncalc
