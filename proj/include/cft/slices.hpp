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
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cft/event_set.hpp"
#include "cft/lattice.hpp"
#include "cft/order.hpp"
#include "cft/report.hpp"

namespace cft {

bool is_slice(const FiniteOrder& order, const EventSet& a);

/// A ∩ (↑B ∪ ↓B) = ∅.
bool space_like_separated(const FiniteOrder& order, const EventSet& a, const EventSet& b);

/// Σ ↠ Γ in the category of all slices: Γ ⊆ D+(Σ).
bool slice_leads_to(const FiniteOrder& order, const EventSet& sigma, const EventSet& gamma);

struct SliceMorphism {
  EventSet source;
  EventSet target;
};

/// A full sub-category of the slices of a finite order, given by a
/// membership predicate, a predicate saying when ⊗ is defined, and
/// optionally its own ↠ (used where the finite order is a window onto an
/// infinite one) and an explicit object list.
class SliceCategory {
 public:
  using Predicate = std::function<bool(const EventSet&)>;
  using PairPredicate = std::function<bool(const EventSet&, const EventSet&)>;
  using Enumerator = std::function<std::vector<EventSet>()>;

  struct Spec {
    std::string name;
    Predicate member;        // defaults to "every slice"
    PairPredicate product;   // defaults to space-like separation
    PairPredicate leads_to;  // defaults to Γ ⊆ D+(Σ) in the order
    Enumerator objects;      // defaults to filtering all antichains
  };

  SliceCategory(std::shared_ptr<const FiniteOrder> order, Spec spec);

  /// Slice(Ω).
  static SliceCategory all_slices(std::shared_ptr<const FiniteOrder> order);

  const FiniteOrder& order() const { return *order_; }
  std::shared_ptr<const FiniteOrder> order_ptr() const { return order_; }
  const std::string& name() const { return spec_.name; }
  const Spec& spec() const { return spec_; }

  /// A slice of the order accepted by the membership predicate.
  bool contains(const EventSet& s) const;

  /// The raw definedness predicate, before any consistency check.
  bool product_predicate(const EventSet& a, const EventSet& b) const;
  bool product_defined(const EventSet& a, const EventSet& b) const;
  /// Σ ⊗ Γ. Throws NotInCategory if an operand or the result is not a
  /// member or the predicate rejects the pair, NotSeparated if the operands
  /// are causally related.
  EventSet tensor(const EventSet& a, const EventSet& b) const;

  /// Σ ↠ Γ between members (false if either is not a member).
  bool leads_to(const EventSet& sigma, const EventSet& gamma) const;

  /// Every object, each exactly once, ordered by (size, members).
  std::vector<EventSet> objects() const;

 private:
  std::shared_ptr<const FiniteOrder> order_;
  Spec spec_;
};

/// Throws InvalidMorphism unless both are morphisms of C.
SliceMorphism monoidal_morphism_product(const SliceCategory& c, const SliceMorphism& m1,
                                        const SliceMorphism& m2);

/// Every antichain of the order, each once, in canonical order.
std::vector<EventSet> enumerate_slices(const FiniteOrder& order);
/// The maximal antichains.
std::vector<EventSet> maximal_slices(const FiniteOrder& order);

/// Every maximal chain of the order meets Σ, equivalently
/// D+(Σ) ∪ D-(Σ) = Ω. False for non-slices.
bool is_cauchy(const FiniteOrder& order, const EventSet& sigma);
/// Cauchy-ness inside a lattice window, decided on the materialised
/// sub-order. Constant-time rows of a window are Cauchy there.
bool is_cauchy(const LatticeWindow& window, const EventSet& sigma);

struct Foliation {
  std::vector<EventSet> leaves;
};

/// Checks that each leaf is a Cauchy slice, that the leaves are pairwise
/// comparable under ↠, cover the order and are pairwise disjoint.
Report validate_foliation(const FiniteOrder& order, const Foliation& f);

/// The category generated by the slices contained in some leaf; ⊗ is
/// defined when both operands lie in one common leaf. Throws
/// InvalidFoliation if validate_foliation fails.
SliceCategory foliation_category(std::shared_ptr<const FiniteOrder> order, const Foliation& f);

struct ValidationOptions {
  /// Upper bound on the number of (Σ, Γ, Δ) triples examined for the
  /// restriction condition; beyond it triples are drawn at random.
  std::size_t max_triples = 200000;
  std::uint64_t seed = 1;
};

/// Checks the three conditions of a category of slices: every relation
/// x <= y is witnessed by members Σ ∋ x, Γ ∋ y with Σ ↠ Γ; restrictions
/// Δ ∩ ◇_{Σ,Γ} of members are members; ∅ is a member and defined products
/// are products of separated slices landing back in the category.
Report validate_slice_category(const SliceCategory& c, const ValidationOptions& opts = {});

/// Whether R is a region of C: a convex set that is a bounded region
/// ◇_{Σ,Γ} with Σ, Γ members (for finite R, unions of bounded regions
/// closed under finite unions are again bounded regions).
bool is_region_of(const SliceCategory& c, const EventSet& r);

/// C|_R, the members contained in R. Throws NotARegionOfC.
SliceCategory restrict_to_region(const SliceCategory& c, const EventSet& r);

/// The same objects over the reversed order. `reversed_leads_to` replaces
/// the generic D+ test when C carried its own ↠. Throws NotReversible if
/// the result is not a category of slices.
SliceCategory reverse_category(const SliceCategory& c,
                               SliceCategory::PairPredicate reversed_leads_to = {},
                               const ValidationOptions& opts = {});

}  // namespace cft
