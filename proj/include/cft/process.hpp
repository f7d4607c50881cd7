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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

namespace cft {

enum class Backend { Quantum, Classical };
std::string_view to_string(Backend b);

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Validity predicates (unitarity, normalisation).
inline constexpr double kValidityTol = 1e-10;
/// Agreement with reference computations.
inline constexpr double kOracleTol = 1e-12;

/// A system: a backend and an ordered list of atomic factor dimensions.
/// Composite indices are big-endian in the factor order.
class ProcObject {
 public:
  explicit ProcObject(Backend backend = Backend::Quantum, std::vector<std::size_t> factors = {});
  static ProcObject unit(Backend backend) { return ProcObject(backend); }

  Backend backend() const { return backend_; }
  const std::vector<std::size_t>& factors() const { return factors_; }
  std::size_t arity() const { return factors_.size(); }
  std::size_t dim() const { return dim_; }
  bool is_unit() const { return factors_.empty(); }

  friend bool operator==(const ProcObject& a, const ProcObject& b) {
    return a.backend_ == b.backend_ && a.factors_ == b.factors_;
  }

 private:
  Backend backend_;
  std::vector<std::size_t> factors_;
  std::size_t dim_;
};

/// Factor lists concatenate. Throws BackendMismatch.
ProcObject tensor_obj(const ProcObject& a, const ProcObject& b);

namespace step {

/// ρ ↦ U ρ U† on the listed factors (in the listed order).
struct Unitary {
  std::vector<std::size_t> factors;
  CMatrix matrix;
};
/// ρ ↦ Σ K ρ K† on the listed factors.
struct Kraus {
  std::vector<std::size_t> factors;
  std::vector<CMatrix> ops;
};
/// Partial trace (quantum) or marginalisation (classical).
struct Discard {
  std::vector<std::size_t> factors;
};
/// Output factor i is input factor perm[i].
struct Permute {
  std::vector<std::size_t> perm;
};
/// p ↦ M p on the listed factors.
struct Stochastic {
  std::vector<std::size_t> factors;
  RMatrix matrix;
};

}  // namespace step

using Step = std::variant<step::Unitary, step::Kraus, step::Discard, step::Permute, step::Stochastic>;

/// A morphism as a program of elementary steps evaluated left to right.
/// Construction checks that each step fits the factor list it acts on and
/// that the program ends on the codomain.
class ProcMorphism {
 public:
  ProcMorphism(ProcObject dom, ProcObject cod, std::vector<Step> steps);
  static ProcMorphism identity(const ProcObject& obj) { return ProcMorphism(obj, obj, {}); }

  const ProcObject& dom() const { return dom_; }
  const ProcObject& cod() const { return cod_; }
  Backend backend() const { return dom_.backend(); }
  const std::vector<Step>& steps() const { return steps_; }

  /// Exact structural equality of the programs.
  friend bool operator==(const ProcMorphism& a, const ProcMorphism& b);

 private:
  ProcObject dom_;
  ProcObject cod_;
  std::vector<Step> steps_;
};

/// g ∘ f. Throws ShapeMismatch unless cod(f) = dom(g).
ProcMorphism compose(const ProcMorphism& g, const ProcMorphism& f);
/// f ⊗ g acting on dom(f) ⊗ dom(g). Throws BackendMismatch.
ProcMorphism tensor_mor(const ProcMorphism& f, const ProcMorphism& g);

/// Discards the listed factors. Throws BadFactorIndex.
ProcMorphism discard(const ProcObject& a, const std::vector<std::size_t>& which);
ProcMorphism discard_all(const ProcObject& a);
/// Throws NotUnitary when ‖U†U - I‖_max exceeds tol, ShapeMismatch when U
/// does not fit the factors, BackendMismatch on classical objects.
ProcMorphism unitary_channel(const ProcObject& a, const std::vector<std::size_t>& factors,
                             const CMatrix& u, double tol = kValidityTol);
/// A completely positive map given by Kraus operators (not necessarily
/// trace preserving).
ProcMorphism kraus_channel(const ProcObject& a, const std::vector<std::size_t>& factors,
                           const std::vector<CMatrix>& ops);
/// A nonnegative matrix on the listed factors (classical backend).
ProcMorphism stochastic_map(const ProcObject& a, const std::vector<std::size_t>& factors,
                            const RMatrix& m);
/// Throws BadFactorIndex unless perm is a permutation of the factors.
ProcMorphism permutation(const ProcObject& a, const std::vector<std::size_t>& perm);

/// A state on an object: a density operator (quantum) or a probability
/// vector (classical).
class ProcState {
 public:
  ProcState(ProcObject obj, CMatrix rho);
  ProcState(ProcObject obj, RVector p);

  /// |ψ⟩⟨ψ|.
  static ProcState pure(const ProcObject& obj, const CVector& psi);
  /// The basis state with the given composite index.
  static ProcState basis(const ProcObject& obj, std::size_t index);

  const ProcObject& object() const { return obj_; }
  Backend backend() const { return obj_.backend(); }
  const CMatrix& density() const { return rho_; }
  const RVector& probabilities() const { return p_; }

  double trace() const;
  bool is_valid(double tol = kValidityTol) const;

 private:
  ProcObject obj_;
  CMatrix rho_;
  RVector p_;
};

ProcState tensor_state(const ProcState& a, const ProcState& b);
/// Entrywise max-norm distance; throws ShapeMismatch on different objects.
double state_distance(const ProcState& a, const ProcState& b);

/// Runs the program on a state without forming a superoperator. Throws
/// ShapeMismatch unless the state lives on dom(f).
ProcState apply(const ProcMorphism& f, const ProcState& rho);

/// Discarding after equals discarding before, on every input basis
/// element; within tol.
bool is_normalised(const ProcMorphism& f, double tol = kValidityTol);

/// Distance between f and g over a basis of the input space. Quantum: the
/// Frobenius norm of the difference of Choi matrices, an upper bound on
/// every entry of f(|i⟩⟨j|) - g(|i⟩⟨j|). Classical: the largest entry of
/// the difference of the stochastic matrices. Throws
/// ShapeMismatch unless the morphisms share domain and codomain.
double morphism_deviation(const ProcMorphism& f, const ProcMorphism& g);
bool morphisms_equal(const ProcMorphism& f, const ProcMorphism& g, double tol = kValidityTol);

/// The Choi matrix Σ_ij |i⟩⟨j| ⊗ f(|i⟩⟨j|), evaluated through apply.
/// Meant for cross-validation; both dimensions must be at most 8.
CMatrix choi_matrix(const ProcMorphism& f);
bool is_completely_positive(const ProcMorphism& f, double tol = kValidityTol);

}  // namespace cft
