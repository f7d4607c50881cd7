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

#include <memory>
#include <random>

#include "cft/cca.hpp"
#include "cft/error.hpp"
#include "cft/field_theory.hpp"
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

PartitionedCCAConfig random_config(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PartitionedCCAConfig c;
  c.U = oracle::random_unitary(4, rng);
  return c;
}

struct Fixture {
  std::shared_ptr<const LatticeWindow> window;
  std::shared_ptr<const FieldTheory> psi;
};

Fixture box(const PartitionedCCAConfig& c, int t1 = 2, std::size_t max_slice = 3) {
  auto w = std::make_shared<const LatticeWindow>(DiamondLattice(1), Window{0, t1, -4, 4});
  CCAWindowOptions o;
  o.max_slice_size = max_slice;
  return {w, build_cca(c, w, o)};
}

struct RingFixture {
  std::shared_ptr<const LatticeWindow> window;
  std::shared_ptr<const FieldTheory> psi;
  std::shared_ptr<const FieldTheory> phi;
};

RingFixture ring(const PartitionedCCAConfig& c, int period = 6, int t1 = 2) {
  auto w = std::make_shared<const LatticeWindow>(DiamondLattice(1, period), Window{0, t1, 0, 0});
  return {w, build_cca(c, w), build_reversal(c, w)};
}

ProcState random_state(const ProcObject& obj, std::mt19937_64& rng) {
  return ProcState(obj, oracle::random_density(obj.dim(), rng));
}

EventSet ev(const LatticeWindow& w, std::vector<LatticeEvent> e) { return w.set_of(e); }

}  // namespace

TEST(Theory, ObjectsAndIdentities) {
  Fixture f = box(random_config(1));
  EXPECT_TRUE(f.psi->object(f.window->order().none()).is_unit());
  EventSet s = ev(*f.window, {{0, {0}}, {0, {2}}});
  EXPECT_EQ(f.psi->object(s).dim(), 16U);
  EXPECT_TRUE(morphisms_equal(f.psi->morphism(s, s), ProcMorphism::identity(f.psi->object(s))));
  EXPECT_TRUE(morphisms_equal(f.psi->discard(s), discard_all(f.psi->object(s))));
  ProcState one = apply(f.psi->discard(f.window->order().none()), ProcState::basis(ProcObject::unit(Backend::Quantum), 0));
  EXPECT_NEAR(one.trace(), 1.0, kOracleTol);
  EXPECT_EQ(code_of([&] { f.psi->object(ev(*f.window, {{0, {0}}, {1, {3}}})); }), ErrorCode::NotInCategory);
  EXPECT_EQ(code_of([&] { f.psi->morphism(ev(*f.window, {{0, {0}}}), ev(*f.window, {{1, {1}}})); }),
            ErrorCode::InvalidMorphism);
}

TEST(Functoriality, StepThenDiscardEqualsDirectDiscard) {
  Fixture f = box(random_config(2));
  EventSet s = ev(*f.window, {{0, {0}}, {0, {2}}});
  EventSet g = ev(*f.window, {{1, {1}}});
  EventSet none = f.window->order().none();
  EXPECT_TRUE(morphisms_equal(compose(f.psi->morphism(g, none), f.psi->morphism(s, g)), f.psi->morphism(s, none)));
}

TEST(Functoriality, RestrictionChainMatchesPartialTrace) {
  Fixture f = box(random_config(3));
  EventSet x = ev(*f.window, {{0, {-2}}, {0, {0}}, {0, {2}}});
  EventSet y = ev(*f.window, {{0, {-2}}, {0, {2}}});
  EventSet z = ev(*f.window, {{0, {2}}});
  std::mt19937_64 rng(5);
  ProcState rho = random_state(f.psi->object(x), rng);
  ProcState two_step = apply(f.psi->morphism(y, z), apply(f.psi->morphism(x, y), rho));
  const std::vector<std::size_t> dims(6, 2);
  CMatrix expected = oracle::partial_trace(rho.density(), dims, {0, 1, 2, 3});
  EXPECT_LT((two_step.density() - expected).cwiseAbs().maxCoeff(), kOracleTol);
  EXPECT_LT(state_distance(two_step, apply(f.psi->morphism(x, z), rho)), kOracleTol);
}

TEST(Functoriality, ExhaustiveOnSmallWindow) {
  Fixture f = box(random_config(4), 2, 2);
  const auto triples = composable_triples(f.psi->category());
  std::size_t brute = 0;
  const auto objs = f.psi->category().objects();
  for (const auto& a : objs) {
    for (const auto& b : objs) {
      if (!f.psi->category().leads_to(a, b)) continue;
      for (const auto& c : objs) brute += f.psi->category().leads_to(b, c);
    }
  }
  EXPECT_EQ(triples.size(), brute);
  Report r = check_functoriality(*f.psi, triples);
  EXPECT_TRUE(r.passed()) << r.to_json().dump();
  EXPECT_LE(r.max_deviation, 1e-10);
}

TEST(Functoriality, BrokenTheoryIsCaught) {
  Fixture f = box(random_config(5), 2, 3);
  const PartitionedCCAConfig other = random_config(6);
  auto other_psi = build_cca(other, f.window, {3});
  // Direct one-step morphisms use a different U from composites.
  FieldTheory broken(
      f.psi->category_ptr(), Backend::Quantum, [p = f.psi](const EventSet& s) { return p->object(s); },
      [p = f.psi, q = other_psi, w = f.window](const EventSet& a, const EventSet& b) {
        const bool two_rows = a.any() && b.any() && w->event(b.find_first()).t - w->event(a.find_first()).t == 2;
        return two_rows ? q->morphism(a, b) : p->morphism(a, b);
      });
  Report r = check_functoriality(broken, composable_triples(f.psi->category()));
  EXPECT_FALSE(r.passed());
}

TEST(Monoidality, UnitLawsAndSeparatedSteps) {
  Fixture f = box(random_config(7), 1, 4);
  const LatticeWindow& w = *f.window;
  EventSet none = w.order().none();
  EventSet s = ev(w, {{0, {-4}}, {0, {-2}}});
  EventSet g = ev(w, {{0, {2}}, {0, {4}}});
  Report units = check_monoidality(*f.psi, {{s, g, s, g}, {s, none, s, none}, {none, none, none, none}});
  EXPECT_TRUE(units.passed()) << units.to_json().dump();
  Report steps = check_monoidality(*f.psi, {{s, g, ev(w, {{1, {-3}}}), ev(w, {{1, {3}}})}});
  EXPECT_TRUE(steps.passed()) << steps.to_json().dump();
  Fixture g3 = box(random_config(7));
  Report sampled = check_monoidality(*g3.psi, separated_quadruples(g3.psi->category(), 100, 11));
  EXPECT_GE(sampled.samples, 100U);
  EXPECT_TRUE(sampled.passed());
}

TEST(Monoidality, ObjectsFactorise) {
  Fixture f = box(random_config(8));
  const LatticeWindow& w = *f.window;
  EventSet s = ev(w, {{0, {-2}}, {0, {0}}, {0, {4}}});
  std::vector<std::size_t> factors;
  for (EventId e : members(s)) {
    const auto one = f.psi->object(make_set(w.size(), {e})).factors();
    factors.insert(factors.end(), one.begin(), one.end());
  }
  EXPECT_EQ(f.psi->object(s).factors(), factors);
  EventSet a = ev(w, {{0, {4}}}), b = ev(w, {{0, {-2}}, {0, {0}}});
  ProcMorphism c = f.psi->coherence(a, b);
  EXPECT_EQ(c.dom(), tensor_obj(f.psi->object(a), f.psi->object(b)));
  EXPECT_EQ(c.cod(), f.psi->object(s));
}

TEST(Environment, DiscardsAndNoSignalling) {
  Fixture f = box(random_config(9));
  const auto& c = f.psi->category();
  std::vector<std::pair<EventSet, EventSet>> products;
  for (const Quadruple& q : separated_quadruples(c, 100, 3)) products.emplace_back(q.sigma, q.gamma);
  Report r = check_environment(*f.psi, all_morphisms(c), products);
  EXPECT_TRUE(r.passed()) << r.to_json().dump();
  auto tops = discard_family(*f.psi, {c.order().none()});
  ASSERT_EQ(tops.size(), 1U);
  EXPECT_TRUE(tops[0].dom().is_unit());
}

TEST(Environment, LossyChannelStillHasEnvironmentStructure) {
  PartitionedCCAConfig lossy;
  CMatrix k0 = CMatrix::Identity(4, 4), k1 = CMatrix::Zero(4, 4);
  k0(2, 2) = k0(3, 3) = std::sqrt(0.5);
  k1(0, 2) = k1(1, 3) = std::sqrt(0.5);
  lossy.U = std::vector<CMatrix>{k0, k1};
  Fixture f = box(lossy, 2, 2);
  Report r = check_environment(*f.psi, all_morphisms(f.psi->category()), {});
  EXPECT_TRUE(r.passed());
}

TEST(States, PushForwardIsStableAndPerturbationIsNot) {
  Fixture f = box(random_config(10));
  const LatticeWindow& w = *f.window;
  EventSet sigma = ev(w, {{0, {-2}}, {0, {0}}, {0, {2}}});
  EventSet gamma = ev(w, {{1, {-1}}, {1, {1}}});
  EventSet region = region_between(w.order(), sigma, gamma);
  std::mt19937_64 rng(1);
  StateFamily fam = push_forward_family(*f.psi, region, sigma, random_state(f.psi->object(sigma), rng));
  EXPECT_TRUE(is_stable_family(*f.psi, fam));
  EXPECT_TRUE(fam.states.size() > 5);
  StateFamily bad = fam;
  const EventSet target = ev(w, {{1, {1}}});
  bad.states.insert_or_assign(members(target), random_state(f.psi->object(target), rng));
  EXPECT_FALSE(is_stable_family(*f.psi, bad));
  StateFamily empty = push_forward_family(*f.psi, w.order().none(), w.order().none(),
                                          ProcState::basis(ProcObject::unit(Backend::Quantum), 0));
  EXPECT_TRUE(is_stable_family(*f.psi, empty));
}

TEST(States, RestrictionIsFunctorial) {
  Fixture f = box(random_config(11));
  const LatticeWindow& w = *f.window;
  EventSet sigma = ev(w, {{0, {-2}}, {0, {0}}, {0, {2}}});
  EventSet gamma = ev(w, {{2, {0}}});
  EventSet r = region_between(w.order(), sigma, gamma);
  EventSet r1 = region_between(w.order(), ev(w, {{0, {0}}, {0, {2}}}), ev(w, {{1, {1}}}));
  EventSet r2 = ev(w, {{0, {0}}, {0, {2}}});
  std::mt19937_64 rng(2);
  StateFamily fam = push_forward_family(*f.psi, r, sigma, random_state(f.psi->object(sigma), rng));
  StateFamily same = restrict_states(*f.psi, r, fam);
  EXPECT_EQ(same.states.size(), fam.states.size());
  for (const auto& [k, s] : fam.states) EXPECT_LT(state_distance(s, same.states.at(k)), kOracleTol);
  StateFamily direct = restrict_states(*f.psi, r2, fam);
  StateFamily twice = restrict_states(*f.psi, r2, restrict_states(*f.psi, r1, fam));
  ASSERT_EQ(direct.states.size(), twice.states.size());
  for (const auto& [k, s] : direct.states) EXPECT_LT(state_distance(s, twice.states.at(k)), kOracleTol);
  EXPECT_EQ(code_of([&] { restrict_states(*f.psi, r, restrict_states(*f.psi, r1, fam)); }), ErrorCode::NotSubset);
  StateFamily initial = restrict_states(*f.psi, sigma, fam);
  EXPECT_EQ(initial.states.size(), 8U);
  EXPECT_LT(state_distance(initial.at(sigma), fam.at(sigma)), kOracleTol);
}

TEST(States, RegionErrors) {
  Fixture f = box(random_config(12));
  const LatticeWindow& w = *f.window;
  EventSet gap = ev(w, {{0, {0}}, {2, {0}}});
  EXPECT_EQ(code_of([&] { region_slices(f.psi->category(), gap); }), ErrorCode::NotARegionOfC);
}

TEST(Reversal, ThereAndBackIsIdentity) {
  RingFixture f = ring(random_config(13));
  const LatticeWindow& w = *f.window;
  ZigZag direct{{w.row(0), w.row(0)}};
  ZigZag back{{w.row(0), w.row(1), w.row(0), w.row(0)}};
  Report r = check_reversal(*f.psi, *f.phi, {{direct, back}, {direct, direct}});
  EXPECT_TRUE(r.passed()) << r.to_json().dump();
  EXPECT_TRUE(morphisms_equal(zigzag_image(*f.psi, *f.phi, back), ProcMorphism::identity(f.psi->object(w.row(0)))));
  auto pairs = sample_zigzag_pairs(*f.psi, *f.phi, 2, 60, 4);
  EXPECT_EQ(pairs.size(), 60U);
  EXPECT_TRUE(check_reversal(*f.psi, *f.phi, pairs).passed());
}

TEST(GlobalStates, FromInitialAndMiddleLeavesAgree) {
  RingFixture f = ring(random_config(14), 6, 3);
  const LatticeWindow& w = *f.window;
  Foliation rows = row_foliation(w);
  std::mt19937_64 rng(3);
  ProcState rho0 = random_state(f.psi->object(w.row(0)), rng);
  GlobalState from0 = global_state_from_cauchy(*f.psi, *f.phi, rows, w.row(0), rho0);
  EXPECT_LT(state_distance(from0.leaves[0], rho0), kOracleTol);
  for (int t = 1; t <= 3; ++t) {
    EXPECT_LT(state_distance(from0.leaves[static_cast<std::size_t>(t)], apply(f.psi->morphism(w.row(0), w.row(t)), rho0)),
              kOracleTol);
  }
  GlobalState from2 = global_state_from_cauchy(*f.psi, *f.phi, rows, w.row(2), from0.leaves[2]);
  for (std::size_t t = 0; t < 4; ++t) EXPECT_LT(state_distance(from0.leaves[t], from2.leaves[t]), 1e-10);
  // the backward leaf evolves forward onto the given data
  EXPECT_LT(state_distance(apply(f.psi->morphism(w.row(0), w.row(2)), from2.leaves[0]), from0.leaves[2]), 1e-10);
  EventSet part = ev(w, {{1, {1}}, {1, {3}}});
  EXPECT_LT(state_distance(from2.state_on(*f.psi, part), apply(f.psi->morphism(w.row(1), part), from0.leaves[1])),
            1e-10);
  StateFamily fam = from0.family_on(*f.psi, region_between(w.order(), w.row(0), w.row(2)));
  EXPECT_TRUE(is_stable_family(*f.psi, fam));
  EXPECT_EQ(code_of([&] { global_state_from_cauchy(*f.psi, *f.phi, rows, part, rho0); }), ErrorCode::NotCauchy);
  EXPECT_EQ(code_of([&] { global_state_from_cauchy(*f.psi, *f.psi, rows, w.row(0), rho0); }), ErrorCode::NotAReversal);
}
