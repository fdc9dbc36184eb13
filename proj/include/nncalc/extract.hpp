#pragma once

#include "nncalc/network.hpp"
#include "nncalc/pwpoly.hpp"

#include <vector>

namespace nncalc {

// Exact realization of a scalar-to-scalar network. Throws on Custom
// activations or d_in, d_out != 1.
PiecewisePoly extract_pieces(const Network& net);

// All outputs of a network along the line t ↦ base + t·e_axis.
std::vector<PiecewisePoly> extract_slice(const Network& net, const RVec& base, std::size_t axis);

inline std::size_t count_pieces(const PiecewisePoly& f) { return f.count_pieces(); }

enum class BoundMode { Weights, Neurons };

// Λ_{L,r} for the given mode (pieces on ℝ).
Integer piece_constant(std::size_t L, unsigned r, BoundMode mode);
// Λ_{L,r}·N^{L−1} (neurons) or max(1, Λ_{L,r}·W^{⌊L/2⌋}) (weights).
Integer piece_bound(std::size_t W, std::size_t N, std::size_t L, unsigned r, BoundMode mode);

}  // namespace nncalc
