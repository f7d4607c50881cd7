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

#include <memory>
#include <optional>
#include <vector>

#include "cft/event_set.hpp"
#include "cft/order.hpp"

namespace cft {

/// A map of finite causal orders. It is a morphism of CausOrd when it is
/// monotone and reflects the strict order (f(x) < f(y) implies x < y); use
/// check_morphism to test that.
struct OrderMorphism {
  std::shared_ptr<const FiniteOrder> dom;
  std::shared_ptr<const FiniteOrder> cod;
  std::vector<EventId> map;

  EventId operator()(EventId x) const { return map.at(x); }
};

/// Throws InvalidMorphism if the map is not total or points outside the
/// codomain; does not test the order conditions.
OrderMorphism make_morphism(std::shared_ptr<const FiniteOrder> dom,
                            std::shared_ptr<const FiniteOrder> cod, std::vector<EventId> map);

bool check_morphism(const OrderMorphism& f);
bool is_injective(const OrderMorphism& f);
bool is_surjective(const OrderMorphism& f);

OrderMorphism identity_morphism(std::shared_ptr<const FiniteOrder> order);
/// g ∘ f. Throws InvalidMorphism unless cod(f) and dom(g) are the same order.
OrderMorphism compose(const OrderMorphism& g, const OrderMorphism& f);

/// The inclusion of the sub-order induced on `s`.
OrderMorphism inclusion(std::shared_ptr<const FiniteOrder> order, const EventSet& s);

struct EpiMono {
  OrderMorphism quotient;   // onto the image order
  OrderMorphism embedding;  // image order into the codomain
};

/// f = embedding ∘ quotient, with the image carrying the order induced
/// from the codomain. Throws InvalidMorphism if f is not a morphism.
EpiMono epi_mono_factor(const OrderMorphism& f);

/// A sub-order inclusion whose image is convex.
bool is_region_morphism(const OrderMorphism& r);
/// A sub-order inclusion whose image bounds every relation of the codomain:
/// for all x <= y there are x', y' with i(x') <= x <= y <= i(y').
bool is_refinement(const OrderMorphism& f);

struct RegionRefinement {
  OrderMorphism refinement;  // dom(i) -> Θ
  OrderMorphism region;      // Θ -> cod(i)
};

/// Factors an injective morphism as region ∘ refinement, where Θ is the
/// union of the diamonds between points of the image. Throws
/// InvalidMorphism if i is not an injective morphism.
RegionRefinement region_refinement_factor(const OrderMorphism& i);

/// For two region/refinement factorisations of the same map, the
/// isomorphism θ: Θ' -> Θ with first.refinement = θ ∘ second.refinement and
/// second.region = first.region ∘ θ, if one exists.
std::optional<OrderMorphism> factorisation_isomorphism(const RegionRefinement& first,
                                                       const RegionRefinement& second);

/// Whether the per-event sections of a pullback may be empty. The slice
/// sections are all slices of the fibre, ∅ included, under AllSlices.
enum class SectionPolicy { AllSlices, NonEmptySections };

struct Pullback {
  std::shared_ptr<const FiniteOrder> suborder;
  std::vector<EventId> embedding;  // suborder event -> dom(f) event
  std::vector<EventSet> slices;    // slices of the suborder
};

/// f*(Σ): the sub-order of dom(f) induced on the preimage of Σ, and its
/// slices ⨆_x Γ_x over all choices of sections Γ_x of the fibres.
/// Throws NotInCategory if Σ is not a slice of cod(f).
Pullback pullback_slice(const OrderMorphism& f, const EventSet& sigma,
                        SectionPolicy policy = SectionPolicy::AllSlices);

}  // namespace cft
