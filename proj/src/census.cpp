#include "nncalc/census.hpp"

#include "nncalc/crossing.hpp"
#include "nncalc/gadgets.hpp"
#include "nncalc/random_net.hpp"

#include <stdexcept>

namespace nncalc {

CensusRow census_row(const Network& net, unsigned r, std::string family, std::uint64_t seed) {
  auto c = complexity(net);
  PiecewisePoly pw = extract_pieces(net);
  CensusRow row;
  row.family = std::move(family);
  row.seed = seed;
  row.r = r;
  row.W = c.W;
  row.L = c.L;
  row.N = c.N;
  row.pieces = pw.count_pieces();
  row.bound_weights = piece_bound(c.W, c.N, c.L, r, BoundMode::Weights);
  row.bound_neurons = piece_bound(c.W, c.N, c.L, r, BoundMode::Neurons);
  row.cr = crossing_number(pw);
  return row;
}

std::vector<CensusRow> run_census(const CensusSpec& spec) {
  struct Job {
    std::size_t budget;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  if (spec.family == "sawtooth") {
    for (std::size_t j = spec.lo; j <= spec.hi; ++j) jobs.push_back({j, 0});
  } else if (spec.family == "random-net") {
    if (spec.r < 1 || spec.L < 1) throw std::invalid_argument("census needs r >= 1 and L >= 1");
    // One mandatory weight per layer at width 1.
    for (std::size_t W = std::max(spec.lo, spec.L); W <= spec.hi; ++W)
      for (std::size_t t = 0; t < spec.trials; ++t) jobs.push_back({W, mix64(spec.seed ^ mix64(W << 20 | t))});
  } else {
    throw std::invalid_argument("unknown census family '" + spec.family + "'");
  }

  std::vector<CensusRow> rows(jobs.size());
  auto run = [&](std::size_t i) {
    const Job& job = jobs[i];
    if (spec.family == "sawtooth") {
      unsigned j = static_cast<unsigned>(job.budget);
      Network net = sawtooth_net({j, 1, SawtoothVariant::Weights, std::max<std::size_t>(spec.L, 2)});
      rows[i] = census_row(net, 1, "sawtooth:" + std::to_string(j), 0);
      return;
    }
    SplitMix64 rng(job.seed);
    RandomNetSpec rs;
    rs.r = spec.r;
    rs.min_L = rs.max_L = spec.L;
    rs.max_W = job.budget;
    rows[i] = census_row(random_network(rs, rng), spec.r, "random-net", job.seed);
  };
  const long n = static_cast<long>(jobs.size());
  if (spec.parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      try {
        run(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  }
  return rows;
}

std::string census_csv_header() { return "family,seed,r,W,L,N,pieces,bound_weights,bound_neurons,cr"; }

std::string census_csv_row(const CensusRow& row) {
  return row.family + "," + std::to_string(row.seed) + "," + std::to_string(row.r) + "," + std::to_string(row.W) +
         "," + std::to_string(row.L) + "," + std::to_string(row.N) + "," + std::to_string(row.pieces) + "," +
         row.bound_weights.get_str() + "," + row.bound_neurons.get_str() + "," + std::to_string(row.cr);
}

}  // namespace nncalc
