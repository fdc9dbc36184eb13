#pragma once

#include "nncalc/json_io.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace nncalc {

// Per-assertion tallies. Each assertion name collects a check count, a
// failure count and the witness of its first failure.
class Recorder {
 public:
  struct Entry {
    std::size_t checks = 0, failures = 0;
    Json witness;
  };

  // The witness callback runs only on the first failure of `name`.
  void check(const std::string& name, bool ok, const std::function<Json()>& witness = {});
  // Appends the results of `later`; witnesses already held win.
  void merge(const Recorder& later);

  std::size_t failures() const;
  std::size_t checks() const;
  const std::map<std::string, Entry>& entries() const { return entries_; }
  Json to_json() const;

 private:
  std::map<std::string, Entry> entries_;
};

struct SuiteOptions {
  std::size_t trials = 20;
  std::uint64_t seed = 7;
  unsigned resolution = 10;
  std::size_t points = 200;  // evaluation points per calculus check
  bool parallel = true;
};

// Check groups. Each one writes assertions under its own name prefix.
void check_calculus(Recorder& rec, const SuiteOptions& opt);
void check_roundtrip(Recorder& rec, const SuiteOptions& opt);
void check_sawtooth(Recorder& rec, const SuiteOptions& opt);
void check_gadget_exactness(Recorder& rec, const SuiteOptions& opt);
void check_pieces(Recorder& rec, const SuiteOptions& opt);
void check_crossing(Recorder& rec, const SuiteOptions& opt);
void check_inapprox(Recorder& rec, const SuiteOptions& opt);
void check_besov(Recorder& rec, const SuiteOptions& opt);

const std::vector<std::string>& suite_names();
// Throws std::invalid_argument for an unknown suite.
Recorder run_suite(const std::string& suite, const SuiteOptions& opt);
// Deterministic report: keys sorted, no timings.
Json suite_report(const std::string& suite, const SuiteOptions& opt, const Recorder& rec);

}  // namespace nncalc
