#pragma once

#include "nncalc/extract.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nncalc {

struct CensusRow {
  std::string family;  // "random-net" or "sawtooth:j"
  std::uint64_t seed = 0;
  unsigned r = 1;
  std::size_t W = 0, L = 0, N = 0;
  std::size_t pieces = 0;
  Integer bound_weights, bound_neurons;  // Λ_{L,r}W^{⌊L/2⌋}, Λ_{L,r}N^{L−1}
  std::size_t cr = 0;
};

struct CensusSpec {
  std::string family = "random-net";
  unsigned r = 1;
  std::size_t L = 3;
  // Weight budgets (random-net) or j values (sawtooth), inclusive. lo > hi is empty.
  std::size_t lo = 1, hi = 0;
  std::size_t trials = 10;  // networks per budget
  std::uint64_t seed = 7;
  bool parallel = true;
};

// Rows in (budget, trial) order. Budgets too small for depth L give no rows.
std::vector<CensusRow> run_census(const CensusSpec& spec);
CensusRow census_row(const Network& net, unsigned r, std::string family, std::uint64_t seed);

std::string census_csv_header();
std::string census_csv_row(const CensusRow& row);

}  // namespace nncalc
