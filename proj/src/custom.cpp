#include "nncalc/custom.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace nncalc {

namespace {

struct Registry {
  std::shared_mutex mutex;
  std::deque<CustomActivation> items;  // deque keeps references stable
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

unsigned register_custom(CustomActivation act) {
  if (act.name.empty()) throw std::invalid_argument("custom activation needs a name");
  if (!act.eval) throw std::invalid_argument("custom activation needs a float evaluator");
  auto& reg = registry();
  std::unique_lock lock(reg.mutex);
  for (std::size_t i = 0; i < reg.items.size(); ++i) {
    if (reg.items[i].name == act.name) {
      reg.items[i] = std::move(act);
      return static_cast<unsigned>(i);
    }
  }
  reg.items.push_back(std::move(act));
  return static_cast<unsigned>(reg.items.size() - 1);
}

const CustomActivation& custom_activation(unsigned handle) {
  auto& reg = registry();
  std::shared_lock lock(reg.mutex);
  if (handle >= reg.items.size()) throw std::out_of_range("unknown custom activation handle " + std::to_string(handle));
  return reg.items[handle];
}

bool custom_registered(unsigned handle) {
  auto& reg = registry();
  std::shared_lock lock(reg.mutex);
  return handle < reg.items.size();
}

std::optional<unsigned> find_custom(const std::string& name) {
  auto& reg = registry();
  std::shared_lock lock(reg.mutex);
  for (std::size_t i = 0; i < reg.items.size(); ++i)
    if (reg.items[i].name == name) return static_cast<unsigned>(i);
  return std::nullopt;
}

}  // namespace nncalc
