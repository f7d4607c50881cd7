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

#pragma once

#include <cstdint>
#include <memory>

#include "cft/lattice.hpp"
#include "cft/morphism.hpp"
#include "cft/order.hpp"

namespace cft {

/// A brick-wall honeycomb over a d = 1 diamond window. Every diamond event
/// (t, x) splits into a merge vertex "m:t,x" and a split vertex "s:t,x" with
/// m:t,x -> s:t,x and s:t,x -> m:t+1,x±1; collapse sends both to (t, x).
struct Honeycomb {
  std::shared_ptr<const FiniteOrder> order;
  std::shared_ptr<const LatticeWindow> diamond;
  OrderMorphism collapse;
};

/// Throws BadParams unless the lattice has d = 1.
Honeycomb honeycomb(const DiamondLattice& lattice, const Window& window);

/// A random order on n events named "0", "1", ...: the pair i < j is an
/// edge with probability p. Deterministic in the seed.
FiniteOrder random_order(std::size_t n, double p, std::uint64_t seed);

}  // namespace cft
