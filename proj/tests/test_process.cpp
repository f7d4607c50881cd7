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

#include <gtest/gtest.h>

#include <random>

#include "cft/error.hpp"
#include "cft/process.hpp"
#include "support/oracles.hpp"

using namespace cft;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IOError;
}

CMatrix pauli_x() {
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

ProcState random_state(const ProcObject& obj, std::mt19937_64& rng) {
  return ProcState(obj, oracle::random_density(obj.dim(), rng));
}

std::vector<std::size_t> random_dims(std::mt19937_64& rng, std::size_t count) {
  std::vector<std::size_t> d;
  for (std::size_t i = 0; i < count; ++i) d.push_back(2 + rng() % 2);
  return d;
}

std::vector<std::size_t> random_subset(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(k);
  return idx;
}

}  // namespace

TEST(Objects, TensorAndUnit) {
  ProcObject a(Backend::Quantum, {2}), b(Backend::Quantum, {3});
  EXPECT_EQ(tensor_obj(a, ProcObject::unit(Backend::Quantum)), a);
  EXPECT_EQ(tensor_obj(a, b).dim(), 6U);
  EXPECT_EQ(code_of([&] { tensor_obj(a, ProcObject(Backend::Classical, {2})); }), ErrorCode::BackendMismatch);
}

TEST(Apply, UnitaryMatchesDenseOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const auto dims = random_dims(rng, 2 + rng() % 2);
    ProcObject obj(Backend::Quantum, dims);
    const auto factors = random_subset(rng, dims.size(), 1 + rng() % 2);
    std::size_t sub = 1;
    for (std::size_t f : factors) sub *= dims[f];
    CMatrix u = oracle::random_unitary(sub, rng);
    ProcState rho = random_state(obj, rng);
    ProcState out = apply(unitary_channel(obj, factors, u), rho);
    CMatrix big = oracle::embed(u, dims, factors);
    EXPECT_LT(max_abs(out.density() - big * rho.density() * big.adjoint()), kOracleTol);
  }
}

TEST(Apply, DiscardMatchesPartialTrace) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const auto dims = random_dims(rng, 3);
    ProcObject obj(Backend::Quantum, dims);
    auto which = random_subset(rng, 3, rng() % 4);
    ProcState rho = random_state(obj, rng);
    ProcState out = apply(discard(obj, which), rho);
    EXPECT_LT(max_abs(out.density() - oracle::partial_trace(rho.density(), dims, which)), kOracleTol);
  }
}

TEST(Apply, PermutationMatchesOracleAndComposes) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dims = random_dims(rng, 3);
    ProcObject obj(Backend::Quantum, dims);
    auto p = random_subset(rng, 3, 3);
    auto q = random_subset(rng, 3, 3);
    ProcState rho = random_state(obj, rng);
    ProcMorphism fp = permutation(obj, p);
    EXPECT_LT(max_abs(apply(fp, rho).density() - oracle::permute(rho.density(), dims, p)), kOracleTol);
    ProcMorphism fq = permutation(fp.cod(), q);
    std::vector<std::size_t> pq(3);
    for (std::size_t i = 0; i < 3; ++i) pq[i] = p[q[i]];
    EXPECT_TRUE(morphisms_equal(compose(fq, fp), permutation(obj, pq)));
  }
  EXPECT_EQ(code_of([] { permutation(ProcObject(Backend::Quantum, {2, 2}), {0, 0}); }), ErrorCode::BadFactorIndex);
}

TEST(Apply, KernelProgramMatchesDenseComposition) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<std::size_t> dims{2, 2, 2, 2};
    ProcObject obj(Backend::Quantum, dims);
    CMatrix u1 = oracle::random_unitary(4, rng), u2 = oracle::random_unitary(4, rng);
    auto f1 = random_subset(rng, 4, 2), f2 = random_subset(rng, 4, 2);
    auto perm = random_subset(rng, 4, 4);
    ProcMorphism f = unitary_channel(obj, f1, u1);
    f = compose(unitary_channel(f.cod(), f2, u2), f);
    f = compose(permutation(f.cod(), perm), f);
    f = compose(discard(f.cod(), {1}), f);
    ProcState rho = random_state(obj, rng);
    CMatrix dense = oracle::embed(u2, dims, f2) * oracle::embed(u1, dims, f1);
    CMatrix expected = oracle::partial_trace(oracle::permute(dense * rho.density() * dense.adjoint(), dims, perm),
                                             dims, {1});
    EXPECT_LT(max_abs(apply(f, rho).density() - expected), kOracleTol);
  }
}

TEST(Apply, TensorOfMorphismsActsFactorwise) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ProcObject a(Backend::Quantum, {2 + rng() % 2}), b(Backend::Quantum, {2 + rng() % 2});
    ProcMorphism f = unitary_channel(a, {0}, oracle::random_unitary(a.dim(), rng));
    ProcMorphism g = compose(discard(b, {0}), unitary_channel(b, {0}, oracle::random_unitary(b.dim(), rng)));
    ProcState ra = random_state(a, rng), rb = random_state(b, rng);
    ProcState lhs = apply(tensor_mor(f, g), tensor_state(ra, rb));
    ProcState rhs = tensor_state(apply(f, ra), apply(g, rb));
    EXPECT_LT(state_distance(lhs, rhs), kOracleTol);
  }
}

TEST(Apply, Interchange) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    ProcObject a(Backend::Quantum, {2}), b(Backend::Quantum, {3});
    auto rand_u = [&](const ProcObject& o) { return unitary_channel(o, {0}, oracle::random_unitary(o.dim(), rng)); };
    ProcMorphism f = rand_u(a), g = rand_u(a), f2 = rand_u(b), g2 = rand_u(b);
    EXPECT_TRUE(morphisms_equal(compose(tensor_mor(g, g2), tensor_mor(f, f2)),
                                tensor_mor(compose(g, f), compose(g2, f2))));
  }
}

TEST(Compose, IdentityAndErrors) {
  ProcObject a(Backend::Quantum, {2});
  ProcMorphism x = unitary_channel(a, {0}, pauli_x());
  EXPECT_TRUE(morphisms_equal(compose(ProcMorphism::identity(a), x), x));
  EXPECT_EQ(code_of([&] { compose(x, discard_all(a)); }), ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of([&] { unitary_channel(a, {0}, CMatrix::Identity(3, 3)); }), ErrorCode::ShapeMismatch);
  CMatrix bad(2, 2);
  bad << 1, 1, 0, 1;
  EXPECT_EQ(code_of([&] { unitary_channel(a, {0}, bad); }), ErrorCode::NotUnitary);
  EXPECT_EQ(code_of([&] { discard(a, {4}); }), ErrorCode::BadFactorIndex);
  EXPECT_EQ(code_of([&] { unitary_channel(ProcObject(Backend::Classical, {2}), {0}, pauli_x()); }),
            ErrorCode::BackendMismatch);
}

TEST(Discard, TraceAndUnit) {
  std::mt19937_64 rng(7);
  ProcObject a(Backend::Quantum, {2, 3});
  ProcState rho = random_state(a, rng);
  EXPECT_NEAR(apply(discard_all(a), rho).density()(0, 0).real(), 1.0, kOracleTol);
  ProcObject unit = ProcObject::unit(Backend::Quantum);
  EXPECT_EQ(discard_all(unit).cod(), unit);
  EXPECT_NEAR(apply(discard_all(unit), ProcState::basis(unit, 0)).trace(), 1.0, kOracleTol);
  for (int trial = 0; trial < 10; ++trial) {
    ProcObject x(Backend::Quantum, random_dims(rng, 1 + rng() % 2));
    ProcObject y(Backend::Quantum, random_dims(rng, 1 + rng() % 2));
    EXPECT_TRUE(morphisms_equal(discard_all(tensor_obj(x, y)), tensor_mor(discard_all(x), discard_all(y))));
  }
  CMatrix a0 = oracle::random_density(2, rng), b0 = oracle::random_density(3, rng);
  ProcState prod(a, oracle::kron(a0, b0));
  EXPECT_LT(max_abs(apply(discard(a, {1}), prod).density() - a0), kOracleTol);
}

TEST(Unitary, Examples) {
  ProcObject q(Backend::Quantum, {2});
  EXPECT_TRUE(morphisms_equal(unitary_channel(q, {0}, CMatrix::Identity(2, 2)), ProcMorphism::identity(q)));
  ProcState zero = ProcState::basis(q, 0);
  ProcState flipped = apply(unitary_channel(q, {0}, pauli_x()), zero);
  EXPECT_LT(state_distance(flipped, ProcState::basis(q, 1)), kOracleTol);
  std::mt19937_64 rng(8);
  ProcObject two(Backend::Quantum, {2, 2});
  ProcMorphism u = unitary_channel(two, {0, 1}, oracle::random_unitary(4, rng));
  for (int i = 0; i < 10; ++i) {
    ProcState out = apply(u, random_state(two, rng));
    EXPECT_TRUE(out.is_valid());
    EXPECT_NEAR(out.trace(), 1.0, kOracleTol);
  }
  EXPECT_TRUE(is_normalised(u));
  EXPECT_TRUE(is_normalised(compose(discard(two, {0}), u)));
  EXPECT_TRUE(is_completely_positive(u));
}

TEST(Normalised, ScaledKernelIsNot) {
  ProcObject q(Backend::Quantum, {2});
  EXPECT_TRUE(is_normalised(discard_all(q)));
  EXPECT_FALSE(is_normalised(kraus_channel(q, {0}, {0.5 * CMatrix::Identity(2, 2)})));
  CMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(0.7);
  k1 << 0, std::sqrt(0.3), 0, 0;
  EXPECT_TRUE(is_normalised(kraus_channel(q, {0}, {k0, k1})));
}

TEST(Equality, Examples) {
  ProcObject q(Backend::Quantum, {2});
  ProcMorphism x = unitary_channel(q, {0}, pauli_x());
  EXPECT_TRUE(morphisms_equal(x, x));
  EXPECT_FALSE(morphisms_equal(x, ProcMorphism::identity(q)));
  ProcObject three(Backend::Quantum, {2, 2, 2});
  ProcMorphism cycle = compose(permutation(three, {1, 2, 0}), permutation(three, {1, 2, 0}));
  EXPECT_TRUE(morphisms_equal(cycle, permutation(three, {2, 0, 1})));
  EXPECT_FALSE(cycle == permutation(three, {2, 0, 1}));
}

TEST(Equality, DeviationBoundsEntrywiseDifference) {
  std::mt19937_64 rng(9);
  ProcObject two(Backend::Quantum, {2, 2});
  for (int trial = 0; trial < 10; ++trial) {
    ProcMorphism f = unitary_channel(two, {0, 1}, oracle::random_unitary(4, rng));
    ProcMorphism g = unitary_channel(two, {0, 1}, oracle::random_unitary(4, rng));
    const double dev = morphism_deviation(f, g);
    CMatrix diff = choi_matrix(f) - choi_matrix(g);
    EXPECT_GE(dev + 1e-12, max_abs(diff));
    EXPECT_NEAR(dev, diff.norm(), 1e-9);
  }
}

TEST(Classical, EmbedsInQuantum) {
  std::mt19937_64 rng(10);
  ProcObject c(Backend::Classical, {2, 2});
  ProcObject q(Backend::Quantum, {2, 2});
  RMatrix swap = RMatrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  std::uniform_real_distribution<double> u;
  for (int trial = 0; trial < 10; ++trial) {
    RVector p(4);
    for (int i = 0; i < 4; ++i) p(i) = u(rng);
    p /= p.sum();
    ProcState classical = apply(stochastic_map(c, {0, 1}, swap), ProcState(c, p));
    ProcState quantum = apply(unitary_channel(q, {0, 1}, swap.cast<Complex>()),
                              ProcState(q, CMatrix(p.cast<Complex>().asDiagonal())));
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(classical.probabilities()(i), quantum.density()(i, i).real(), kOracleTol);
    ProcState marg = apply(discard(c, {0}), ProcState(c, p));
    EXPECT_NEAR(marg.probabilities()(0), p(0) + p(2), kOracleTol);
  }
  EXPECT_TRUE(is_normalised(stochastic_map(c, {0, 1}, swap)));
}

TEST(Choi, PositiveForChannels) {
  ProcObject q(Backend::Quantum, {2});
  CMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(0.6);
  k1 << 0, std::sqrt(0.4), 0, 0;
  EXPECT_TRUE(is_completely_positive(kraus_channel(q, {0}, {k0, k1})));
  EXPECT_EQ(choi_matrix(ProcMorphism::identity(q)).rows(), 4);
}
