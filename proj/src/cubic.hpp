#pragma once

#include <cstdint>
#include <vector>

#include "graph.hpp"

namespace cim {

// All non-isomorphic connected 3-regular graphs on n vertices, unit weights.
// n must be even and within [4, 10]; counts are 1, 2, 5, 19.
std::vector<WeightedGraph> enumerate_cubic_graphs(int n);
constexpr int kCubicEnumMin = 4;
constexpr int kCubicEnumMax = 10;

// Uniform simple connected 3-regular graph via the pairing model with
// rejection. Deterministic given the seed.
WeightedGraph random_cubic_graph(int n, uint64_t seed);

// Minimum adjacency-matrix bit string over all vertex permutations, packed
// row-major over the upper triangle. Exact; used for isomorphism dedup.
std::vector<uint8_t> canonical_form(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

} // namespace cim
