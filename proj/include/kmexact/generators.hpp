#pragma once

#include <cstdint>

#include "kmexact/fl_solver.hpp"
#include "kmexact/metric.hpp"
#include "kmexact/reductions.hpp"

namespace kmexact {

// Seeded instance models. "grid-l1" places points on an integer grid and
// takes L1 distances (a true metric); "closure" draws random weights and
// runs a shortest-path closure, so triangle inequality holds there too.
MetricInstance gen_grid_l1(int n, std::uint64_t seed, int extent = 32);
MetricInstance gen_closure(int n, std::uint64_t seed, Cost max_weight = 50);

// Uniform client-facility table in {0..max_dist}; no metric structure.
FLInstance gen_fl_uniform(int clients, int facilities, int k, Cost max_dist,
                          std::uint64_t seed);

// Random connected graph: a random spanning tree plus extra edges.
SimpleGraph gen_connected_graph(int n, int extra_edges, std::uint64_t seed);

// Random covering set system (every element belongs to >= 1 set).
SetSystem gen_covering_system(int universe, int sets, int k, std::uint64_t seed);

}  // namespace kmexact
