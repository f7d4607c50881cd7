// Copyright 2026 The causal-fields Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cft/generators.hpp"

#include <random>
#include <string>
#include <vector>

#include "cft/error.hpp"

namespace cft {

Honeycomb honeycomb(const DiamondLattice& lattice, const Window& window) {
  if (lattice.dim() != 1) throw Error(ErrorCode::BadParams, "the honeycomb is built over d = 1");
  auto diamond = std::make_shared<const LatticeWindow>(lattice, window);
  const std::size_t n = diamond->size();
  std::vector<std::string> names(2 * n);
  std::vector<FiniteOrder::Edge> edges;
  for (EventId e = 0; e < n; ++e) {
    const std::string base = to_string(diamond->event(e));
    names[2 * e] = "m:" + base;
    names[2 * e + 1] = "s:" + base;
    edges.emplace_back(2 * e, 2 * e + 1);
    for (EventId next : diamond->order().successors(e)) edges.emplace_back(2 * e + 1, 2 * next);
  }
  auto order = std::make_shared<const FiniteOrder>(FiniteOrder::from_edges(2 * n, edges, std::move(names)));
  std::vector<EventId> map(2 * n);
  for (EventId v = 0; v < 2 * n; ++v) map[v] = v / 2;
  OrderMorphism collapse = make_morphism(order, diamond->order_ptr(), std::move(map));
  return Honeycomb{order, diamond, std::move(collapse)};
}

FiniteOrder random_order(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(p);
  std::vector<FiniteOrder::Edge> edges;
  for (EventId i = 0; i < n; ++i) {
    for (EventId j = i + 1; j < n; ++j) {
      if (edge(rng)) edges.emplace_back(i, j);
    }
  }
  return FiniteOrder::from_edges(n, edges);
}

}  // namespace cft
