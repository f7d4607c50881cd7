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

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cft/field_theory.hpp"
#include "cft/lattice.hpp"
#include "cft/process.hpp"
#include "cft/report.hpp"
#include "cft/slices.hpp"

namespace cft {

// -- partitioned causal cellular automata -----------------------------------

/// A scattering map on H^⊗N: a unitary matrix, a list of Kraus operators
/// (quantum backend) or a column-stochastic matrix (classical backend).
using Scattering = std::variant<CMatrix, std::vector<CMatrix>, RMatrix>;

struct PartitionedCCAConfig {
  int d = 1;
  std::size_t cell_dim = 2;
  Backend backend = Backend::Quantum;
  Scattering U = CMatrix();
  std::optional<Scattering> U_inv;
  /// Events where a different scattering map acts. Breaks homogeneity;
  /// used to build inhomogeneous automata.
  std::map<LatticeEvent, Scattering> overrides;
};

/// dim(H)^(2^d), the dimension U acts on.
std::size_t scattering_dim(const PartitionedCCAConfig& config);
/// Throws BadConfig on shape, backend or normalisation problems.
void validate_config(const PartitionedCCAConfig& config);

/// Σ_{t,X}: a time and a sorted set of sites of parity t.
struct LatticeSlice {
  int t = 0;
  std::vector<Coord> x;

  bool empty() const { return x.empty(); }
  std::size_t size() const { return x.size(); }
  auto operator<=>(const LatticeSlice&) const = default;
};

/// Wraps, sorts and deduplicates the sites. Throws BadParams on a parity
/// mismatch or a wrong coordinate count.
LatticeSlice make_lattice_slice(const DiamondLattice& lattice, int t, std::vector<Coord> x);
std::string to_string(const LatticeSlice& s);

/// ∪_{x∈X} (x + N), sorted.
std::vector<Coord> neighbour_sites(const DiamondLattice& lattice, const std::vector<Coord>& x);
/// ∪_{x∈X} (x + N^(k)), sorted.
std::vector<Coord> cone_sites(const DiamondLattice& lattice, const std::vector<Coord>& x, int k);

/// Σ_{t,X} ↠ Σ_{t+k,Y} iff ∪_{y∈Y} (y + N^(k)) ⊆ X. Throws NegativeTimeGap
/// when k < 0.
bool lattice_slice_leq(const DiamondLattice& lattice, const LatticeSlice& a, const LatticeSlice& b);

struct ElementaryMorphism {
  enum class Kind { Restriction, OneStep };
  Kind kind;
  LatticeSlice from;
  LatticeSlice to;
};

/// Σ_{t,X0} ↠ Σ_{t,Y0} ↠ Σ_{t+1,X1} ↠ Σ_{t+1,X1} ↠ ... ↠ Σ_{t+k,Xk}, where
/// each Y_{i-1} is the full predecessor set of X_i; restrictions other than
/// the first are identities. Throws InvalidMorphism.
std::vector<ElementaryMorphism> factorize_morphism(const DiamondLattice& lattice,
                                                   const LatticeSlice& a, const LatticeSlice& b);

/// H^⊗(N×X), events in lexicographic order, inner factors in neighbourhood
/// order.
ProcObject cca_object(const PartitionedCCAConfig& config, std::size_t events);

/// Identity on Y, discard on X∖Y. Throws NotSubset.
ProcMorphism restriction_kernel(const PartitionedCCAConfig& config, const LatticeSlice& x,
                                const LatticeSlice& y);

/// Σ_{t,Y} ↠ Σ_{t+1,X}: U at every y, then the factor (δ, y) is kept iff
/// y−δ ∈ X and becomes the δ factor of x = y−δ. Throws
/// WrongPredecessorSet unless Y = X + N.
ProcMorphism one_step_kernel(const PartitionedCCAConfig& config, const DiamondLattice& lattice,
                             const LatticeSlice& y, const LatticeSlice& x);

/// Σ_{t,X} ↠rev Σ_{t−1,Y}: the factor (δ, x) is kept iff x+δ ∈ Y and
/// becomes the δ factor of y = x+δ, then U⁻¹ acts at every y. Throws
/// WrongPredecessorSet unless X = Y + N, BadConfig without U⁻¹.
ProcMorphism reverse_step_kernel(const PartitionedCCAConfig& config, const DiamondLattice& lattice,
                                 const LatticeSlice& x, const LatticeSlice& y);

/// The automaton on lattice coordinates.
class PartitionedCCA {
 public:
  /// Throws BadConfig, or BadParams when the lattice dimension differs.
  PartitionedCCA(PartitionedCCAConfig config, DiamondLattice lattice);

  const PartitionedCCAConfig& config() const { return config_; }
  const DiamondLattice& lattice() const { return lattice_; }

  ProcObject object(const LatticeSlice& s) const;

  /// The cone rule, with ∅ reachable from everything.
  bool leads_to(const LatticeSlice& a, const LatticeSlice& b) const;
  /// Ψ(Σ ↠ Γ) composed from the factorization. Throws InvalidMorphism.
  ProcMorphism morphism(const LatticeSlice& a, const LatticeSlice& b) const;

  /// The cone rule backwards in time: Σ_{t,X} ↠rev Σ_{t−k,Y}.
  bool reverse_leads_to(const LatticeSlice& a, const LatticeSlice& b) const;
  /// The same construction on the reversed order with U⁻¹. Throws
  /// InvalidMorphism, or BadConfig without U⁻¹.
  ProcMorphism reverse_morphism(const LatticeSlice& a, const LatticeSlice& b) const;

 private:
  PartitionedCCAConfig config_;
  DiamondLattice lattice_;
};

// -- the automaton as a field theory on a window ----------------------------

struct CCAWindowOptions {
  /// Objects are the subsets of one row with at most this many events.
  std::size_t max_slice_size = SIZE_MAX;
};

/// Throws NotInCategory unless the events lie in one row.
LatticeSlice to_lattice_slice(const LatticeWindow& window, const EventSet& s);
/// Throws UnknownEvent for sites outside the window.
EventSet to_event_set(const LatticeWindow& window, const LatticeSlice& s);

/// Constant-time slices of the window, ⊗ = disjoint union within a row,
/// and ↠ given by the lattice cone rule. On a box window this is the
/// window onto the infinite lattice; on a ring window with full rows the
/// rows are Cauchy and form a foliation.
std::shared_ptr<const SliceCategory> cca_category(std::shared_ptr<const LatticeWindow> window,
                                                  const CCAWindowOptions& opts = {});
/// The same objects over the reversed order with the backwards cone rule.
std::shared_ptr<const SliceCategory> cca_reverse_category(std::shared_ptr<const LatticeWindow> window,
                                                          const CCAWindowOptions& opts = {});

/// The rows of the window, in time order.
Foliation row_foliation(const LatticeWindow& window);

/// Ψ(Σ_{t,X}) = H^⊗(N×X) with the coherence permutation that interleaves the
/// events of a product into lexicographic order. Throws BadConfig.
std::shared_ptr<const FieldTheory> build_cca(const PartitionedCCAConfig& config,
                                             std::shared_ptr<const LatticeWindow> window,
                                             const CCAWindowOptions& opts = {});

/// The construction on the reversed order using config.U_inv as given,
/// without checking that it inverts U. Throws BadConfig without U_inv.
std::shared_ptr<const FieldTheory> build_reverse_theory(const PartitionedCCAConfig& config,
                                                        std::shared_ptr<const LatticeWindow> window,
                                                        const CCAWindowOptions& opts = {});

/// The causal reversal built from U⁻¹: config.U_inv when present, else U†
/// for unitaries and the transpose for permutation matrices. Throws
/// NotInvertible unless U⁻¹∘U = U∘U⁻¹ = id within 1e-10.
std::shared_ptr<const FieldTheory> build_reversal(const PartitionedCCAConfig& config,
                                                  std::shared_ptr<const LatticeWindow> window,
                                                  const CCAWindowOptions& opts = {});

/// U⁻¹ as used by build_reversal. Throws NotInvertible.
Scattering inverse_scattering(const PartitionedCCAConfig& config);

// -- symmetries -------------------------------------------------------------

/// A generator acting by a (possibly partial, on windows) map of events.
struct SymmetryGenerator {
  std::string name;
  std::vector<std::optional<EventId>> image;
  std::vector<std::optional<EventId>> inverse;
};

/// A group presented by generators acting on a finite order. For a free
/// abelian group (ℤ^k with the generators as basis) elements are exponent
/// vectors; otherwise generators must act by total permutations and
/// elements are compared by their action.
struct SymmetryAction {
  std::string name;
  std::shared_ptr<const FiniteOrder> order;
  std::vector<SymmetryGenerator> generators;
  bool free_abelian = false;
};

struct Letter {
  std::size_t generator = 0;
  int power = 1;  // ±1
};
/// Letters act left to right: {a, b} means first a, then b.
using Word = std::vector<Letter>;

std::string to_string(const SymmetryAction& action, const Word& w);
/// Every word of length 1..max_len over the generators and their inverses.
std::vector<Word> words_up_to(const SymmetryAction& action, std::size_t max_len);
/// g(Σ), or nothing if g leaves the window on some event of Σ.
std::optional<EventSet> act(const SymmetryAction& action, const Word& w, const EventSet& s);

/// Generators given as permutations of the events of an explicit order.
/// Throws BadParams unless every entry is a permutation.
SymmetryAction permutation_action(std::shared_ptr<const FiniteOrder> order,
                                  const std::vector<std::vector<EventId>>& perms);
/// τ_δ(t, x) = (t+1, x−δ) for every δ ∈ N, restricted to the window.
SymmetryAction lattice_translations(const LatticeWindow& window);

struct SymmetryCheckOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  /// When set, also checks that the group acts transitively on the leaves.
  std::optional<Foliation> foliation;
};

/// Generators are order automorphisms where defined; on sampled objects and
/// morphisms g maps slices of C to slices of C, preserves ↠ and ⊗.
Report check_symmetry_action(const SymmetryAction& action, const SliceCategory& c,
                             const SymmetryCheckOptions& opts = {});

/// α_g(Σ): Ψ(Σ) → Ψ(g(Σ)) for every generator and sign.
struct InvarianceData {
  std::function<ProcMorphism(std::size_t generator, int power, const EventSet& sigma)> alpha;
};

/// α = identity, valid when g(Σ) and Σ always have equal objects.
InvarianceData identity_invariance(const FieldTheory& psi);

/// α_w(Σ) by the cocycle rule α_{hg} = (α_h g) ∘ α_g. Throws
/// InvalidMorphism if w leaves the window on Σ.
ProcMorphism alpha_of_word(const FieldTheory& psi, const SymmetryAction& action,
                           const InvarianceData& data, const Word& w, const EventSet& sigma);

struct InvarianceOptions {
  std::size_t max_word = 3;
  /// Morphisms examined; 0 means every morphism of C.
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  double tol = kValidityTol;
  /// Require structurally identical kernels instead of numerical equality.
  bool exact = false;
};

/// Naturality α_w(Γ) ∘ Ψ(Σ↠Γ) = Ψ(wΣ↠wΓ) ∘ α_w(Σ) for every word and
/// sampled morphism, and agreement of α on words naming the same element.
Report check_invariance(const FieldTheory& psi, const SymmetryAction& action,
                        const InvarianceData& data, const InvarianceOptions& opts = {});

// -- Dirac automaton --------------------------------------------------------

/// 1 ⊕ σ_X exp(−imε σ_X) ⊕ 1 in the basis (−−, −+, +−, ++).
CMatrix dirac_scattering(double m, double eps);
/// Exchanges the two factors of H ⊗ H.
CMatrix factor_swap(std::size_t cell_dim);
/// d = 1, H = ℂ², U = SWAP ∘ dirac_scattering(m, ε) and U⁻¹ = U†.
PartitionedCCAConfig dirac_config(double m, double eps);

/// The one-particle sector of a d = 1, dim H = 2 automaton on a ring of P
/// sites. At event x the amplitude right(x) belongs to the factor coming
/// from x−1 and left(x) to the factor coming from x+1.
class SingleParticleWalk {
 public:
  /// Throws BadConfig unless U maps the vacuum to itself and the
  /// one-particle span to itself unitarily, BadParams unless P is even
  /// and at least 4.
  SingleParticleWalk(const PartitionedCCAConfig& config, int period, int t0 = 0);

  int time() const { return t_; }
  int period() const { return period_; }
  /// The sites occupied at the current time (parity of t).
  std::vector<int> sites() const;

  const std::vector<Complex>& right() const { return right_; }
  const std::vector<Complex>& left() const { return left_; }
  /// Sets the amplitudes, indexed by site; entries off the current parity
  /// must vanish. Throws ShapeMismatch.
  void set(std::vector<Complex> right, std::vector<Complex> left);

  void step();
  double norm() const;
  /// |right(x)|² + |left(x)|² per site.
  std::vector<double> marginals() const;
  /// 2×2 block of U on (right, left).
  const Eigen::Matrix2cd& coin() const { return coin_; }

 private:
  int period_;
  int t_;
  Eigen::Matrix2cd coin_;
  std::vector<Complex> right_;
  std::vector<Complex> left_;
};

}  // namespace cft
