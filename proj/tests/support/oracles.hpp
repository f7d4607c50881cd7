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

// Reference computations used by the tests. Each one is written from the
// definitions, by brute force, without going through the library code it is
// compared against.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cft/event_set.hpp"
#include "cft/order.hpp"

namespace oracle {

using cft::EventId;
using cft::EventSet;
using cft::FiniteOrder;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// -- orders -----------------------------------------------------------------

/// Every maximal chain of the order from a minimal element up to x, as
/// lists in increasing order, found by walking covering relations down.
std::vector<std::vector<EventId>> chains_into(const FiniteOrder& order, EventId x);
/// Every maximal chain from x up to a maximal element.
std::vector<std::vector<EventId>> chains_out_of(const FiniteOrder& order, EventId x);
/// Every maximal chain of the whole order.
std::vector<std::vector<EventId>> maximal_chains(const FiniteOrder& order);

/// x ∈ D+(A) iff every chain into x meets A.
EventSet future_domain(const FiniteOrder& order, const EventSet& a);
EventSet past_domain(const FiniteOrder& order, const EventSet& a);
/// Every maximal chain meets Σ.
bool is_cauchy(const FiniteOrder& order, const EventSet& sigma);

/// A random DAG on n events, edges i → j (i < j) with probability p. Not
/// the library generator.
FiniteOrder random_dag(std::size_t n, double p, std::mt19937_64& rng);

/// All subsets of an n-element universe.
std::vector<EventSet> all_subsets(std::size_t n);

// -- dense linear algebra ---------------------------------------------------

CMatrix kron(const CMatrix& a, const CMatrix& b);
/// The operator acting as `op` on `factors` (in that order) and as the
/// identity elsewhere, on the big-endian product of `dims`.
CMatrix embed(const CMatrix& op, const std::vector<std::size_t>& dims,
              const std::vector<std::size_t>& factors);
/// Traces out `traced`.
CMatrix partial_trace(const CMatrix& rho, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& traced);
/// Output factor i is input factor perm[i].
CMatrix permute(const CMatrix& rho, const std::vector<std::size_t>& dims,
                const std::vector<std::size_t>& perm);
CMatrix random_unitary(std::size_t dim, std::mt19937_64& rng);
CMatrix random_density(std::size_t dim, std::mt19937_64& rng);

// -- Dirac references -------------------------------------------------------

struct Spinor {
  std::vector<Complex> right;
  std::vector<Complex> left;
};

/// Upwind transport with Courant number one and an implicit-midpoint mass
/// coupling, on a ring of `period` sites:
///   R(x+1) ← [(1 + iμX/2)⁻¹(1 − iμX/2)(R, L)(x)]_R, L(x−1) ← [...]_L,
/// with μ = m ε.
Spinor dirac_finite_difference(double m, double eps, const Spinor& initial, int steps);

/// The continuum Dirac equation ∂t R = −∂x R − i m L, ∂t L = ∂x L − i m R
/// solved exactly in Fourier space on a ring of length period·ε. The
/// initial data is sampled on the half-integer grid y = j/2 (lattice
/// units); the result is returned on the same grid.
Spinor dirac_fourier(double m, double eps, const std::function<Complex(double)>& right0,
                     const std::function<Complex(double)>& left0, int period, double time);

}  // namespace oracle
