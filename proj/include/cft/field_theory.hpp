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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "cft/event_set.hpp"
#include "cft/process.hpp"
#include "cft/report.hpp"
#include "cft/slices.hpp"

namespace cft {

struct FieldTheoryOptions {
  /// Also check that distinct slices get distinct objects.
  bool injective_objects = false;
};

/// A causal field theory Ψ: C → D given by its action on objects and on
/// morphisms Σ ↠ Γ of C. Morphism images are cached.
///
/// The coherence map Ψ(Σ) ⊗ Ψ(Γ) → Ψ(Σ ⊗ Γ) lets a theory store the
/// factors of a product slice in its own canonical order; when omitted it is
/// the identity and the two objects must coincide.
class FieldTheory {
 public:
  using ObjectMap = std::function<ProcObject(const EventSet&)>;
  using MorphismMap = std::function<ProcMorphism(const EventSet&, const EventSet&)>;
  using Coherence = std::function<ProcMorphism(const EventSet&, const EventSet&)>;

  using Options = FieldTheoryOptions;

  FieldTheory(std::shared_ptr<const SliceCategory> category, Backend backend, ObjectMap objects,
              MorphismMap morphisms, Coherence coherence = {}, Options options = {});

  const SliceCategory& category() const { return *category_; }
  std::shared_ptr<const SliceCategory> category_ptr() const { return category_; }
  Backend backend() const { return backend_; }
  const Options& options() const { return options_; }

  /// Ψ(Σ). Throws NotInCategory.
  ProcObject object(const EventSet& s) const;
  /// Ψ(Σ ↠ Γ). Throws InvalidMorphism when Σ ↠ Γ fails in C, ShapeMismatch
  /// when the assigned kernel does not run between Ψ(Σ) and Ψ(Γ).
  ProcMorphism morphism(const EventSet& from, const EventSet& to) const;
  /// ⊤_Σ := Ψ(Σ ↠ ∅).
  ProcMorphism discard(const EventSet& s) const;
  /// Ψ(Σ) ⊗ Ψ(Γ) → Ψ(Σ ⊗ Γ). Throws NotInCategory when ⊗ is undefined.
  ProcMorphism coherence(const EventSet& a, const EventSet& b) const;

 private:
  std::shared_ptr<const SliceCategory> category_;
  Backend backend_;
  ObjectMap objects_;
  MorphismMap morphisms_;
  Coherence coherence_;
  Options options_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<std::vector<EventId>, std::vector<EventId>>, ProcMorphism> cache_;
};

// -- samples ----------------------------------------------------------------

struct Triple {
  EventSet first, second, third;  // first ↠ second ↠ third
};

/// Σ ⊗ Γ ↠ Σ' ⊗ Γ' built from Σ ↠ Σ' and Γ ↠ Γ'.
struct Quadruple {
  EventSet sigma, gamma, sigma2, gamma2;
};

/// Every composable pair of morphisms of C (as triples of objects).
std::vector<Triple> composable_triples(const SliceCategory& c);
/// Random quadruples whose products are defined, preferring non-empty
/// operands. Deterministic in the seed.
std::vector<Quadruple> separated_quadruples(const SliceCategory& c, std::size_t count,
                                            std::uint64_t seed);
/// Every morphism Σ ↠ Γ of C.
std::vector<std::pair<EventSet, EventSet>> all_morphisms(const SliceCategory& c);

// -- law checks -------------------------------------------------------------

/// Ψ(id) = id and Ψ(Γ↠Δ) ∘ Ψ(Σ↠Γ) = Ψ(Σ↠Δ) on the samples.
Report check_functoriality(const FieldTheory& psi, const std::vector<Triple>& samples,
                           double tol = kValidityTol);

/// Ψ(Σ ⊗ Γ) ≅ Ψ(Σ) ⊗ Ψ(Γ) through the coherence map, and
/// Ψ((Σ⊗Γ) ↠ (Σ'⊗Γ')) = Ψ(Σ↠Σ') ⊗ Ψ(Γ↠Γ') up to it.
Report check_monoidality(const FieldTheory& psi, const std::vector<Quadruple>& samples,
                         double tol = kValidityTol);

/// The effects ⊤_Σ for the given slices.
std::vector<ProcMorphism> discard_family(const FieldTheory& psi, const std::vector<EventSet>& slices);

/// ⊤_Γ ∘ Ψ(Σ↠Γ) = ⊤_Σ on `morphisms` and ⊤_{Σ⊗Γ} = ⊤_Σ ⊗ ⊤_Γ on
/// `products` (pairs with a defined product).
Report check_environment(const FieldTheory& psi,
                         const std::vector<std::pair<EventSet, EventSet>>& morphisms,
                         const std::vector<std::pair<EventSet, EventSet>>& products,
                         double tol = kValidityTol);

// -- states over regions ----------------------------------------------------

/// A state for every slice of C|_R, keyed by the sorted event ids.
struct StateFamily {
  EventSet region;
  std::map<std::vector<EventId>, ProcState> states;

  /// Throws NotInCategory if the family has no entry for s.
  const ProcState& at(const EventSet& s) const;
};

/// The slices of C|_R. Throws NotARegionOfC, or NonEnumerableRegion when
/// the region has too many slices to list.
std::vector<EventSet> region_slices(const SliceCategory& c, const EventSet& region);

/// ρ_Δ = Ψ(Σ ↠ Δ)(ρ_Σ) for every slice Δ of C|_R. Throws InvalidMorphism if
/// some Δ is not reachable from Σ.
StateFamily push_forward_family(const FieldTheory& psi, const EventSet& region,
                                const EventSet& sigma, const ProcState& rho);

/// Ψ(Δ ↠ Δ') ∘ ρ_Δ = ρ_Δ' for all Δ ↠ Δ' in C|_R.
Report stability_report(const FieldTheory& psi, const StateFamily& family, double tol = kValidityTol);
bool is_stable_family(const FieldTheory& psi, const StateFamily& family, double tol = kValidityTol);

/// Restriction along R' ⊆ R: the entries of ρ for the slices of C|_R'.
/// Throws NotARegionOfC or NotSubset.
StateFamily restrict_states(const FieldTheory& psi, const EventSet& sub_region,
                            const StateFamily& rho);

// -- reversal ---------------------------------------------------------------

/// Σ ↠ Δ1 ↠rev Δ2 ↠ ... ↠ Δ2n ↠ Γ, stored as [Σ, Δ1, ..., Δ2n, Γ].
struct ZigZag {
  std::vector<EventSet> slices;
  std::size_t zigzags() const { return slices.size() < 2 ? 0 : (slices.size() - 2) / 2; }
};

/// The composite of Ψ and Φ images along the chain. Throws InvalidMorphism
/// if a link is not a morphism of its category.
ProcMorphism zigzag_image(const FieldTheory& psi, const FieldTheory& phi, const ZigZag& chain);

/// Random pairs of chains with common ends and at most max_zigzag
/// reversals each. Deterministic in the seed.
std::vector<std::pair<ZigZag, ZigZag>> sample_zigzag_pairs(const FieldTheory& psi,
                                                           const FieldTheory& phi,
                                                           std::size_t max_zigzag,
                                                           std::size_t count, std::uint64_t seed);

/// Φ agrees with Ψ on the objects met, and both chains of every pair have
/// the same image.
Report check_reversal(const FieldTheory& psi, const FieldTheory& phi,
                      const std::vector<std::pair<ZigZag, ZigZag>>& samples,
                      double tol = kValidityTol);

/// A global state of a theory on a foliation category, stored leaf by leaf.
struct GlobalState {
  Foliation foliation;
  std::vector<ProcState> leaves;

  /// ρ_Δ for a slice inside some leaf L, as Ψ(L ↠ Δ)(ρ_L).
  ProcState state_on(const FieldTheory& psi, const EventSet& delta) const;
  /// The family over a region of C.
  StateFamily family_on(const FieldTheory& psi, const EventSet& region) const;
};

/// Reconstruction from one Cauchy leaf: ρ_Δ = Ψ(Σ ↠ Δ) ρ_Σ for leaves after Σ and
/// Φ(Σ ↠rev Δ) ρ_Σ for leaves before it. Throws NotCauchy if Σ is not a
/// leaf of the foliation and NotAReversal if Φ is not defined on the
/// reversed order or disagrees with Ψ on some leaf.
GlobalState global_state_from_cauchy(const FieldTheory& psi, const FieldTheory& phi,
                                     const Foliation& foliation, const EventSet& sigma,
                                     const ProcState& rho);

}  // namespace cft
