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

#include "cft/process.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <string>

#include "cft/error.hpp"

namespace cft {

std::string_view to_string(Backend b) {
  return b == Backend::Quantum ? "quantum" : "classical";
}

ProcObject::ProcObject(Backend backend, std::vector<std::size_t> factors)
    : backend_(backend), factors_(std::move(factors)), dim_(1) {
  for (std::size_t f : factors_) {
    if (f == 0) throw Error(ErrorCode::ShapeMismatch, "factor of dimension zero");
    dim_ *= f;
  }
}

ProcObject tensor_obj(const ProcObject& a, const ProcObject& b) {
  if (a.backend() != b.backend()) {
    throw Error(ErrorCode::BackendMismatch, "cannot tensor objects of different backends");
  }
  std::vector<std::size_t> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return ProcObject(a.backend(), std::move(f));
}

// ---------------------------------------------------------------------------
// Index bookkeeping. Composite indices are big-endian in the factor order.

namespace {

using Dims = std::vector<std::size_t>;

Dims strides_of(const Dims& dims) {
  Dims s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

// Offsets of every multi-index over `list`, the first listed factor varying
// slowest.
Dims offsets(const Dims& dims, const Dims& strides, const Dims& list) {
  Dims out{0};
  for (std::size_t f : list) {
    Dims next;
    next.reserve(out.size() * dims[f]);
    for (std::size_t o : out) {
      for (std::size_t v = 0; v < dims[f]; ++v) next.push_back(o + v * strides[f]);
    }
    out = std::move(next);
  }
  return out;
}

struct Split {
  Dims sub;        // offsets over the selected factors
  Dims rest;       // offsets over the remaining factors, in order
  Dims rest_dims;  // dimensions of the remaining factors
};

Split split(const Dims& dims, const Dims& factors) {
  Dims strides = strides_of(dims);
  std::vector<bool> picked(dims.size(), false);
  for (std::size_t f : factors) picked[f] = true;
  Dims rest_list;
  Split out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (!picked[i]) {
      rest_list.push_back(i);
      out.rest_dims.push_back(dims[i]);
    }
  }
  out.sub = offsets(dims, strides, factors);
  out.rest = offsets(dims, strides, rest_list);
  return out;
}

std::size_t product(const Dims& dims, const Dims& factors) {
  std::size_t p = 1;
  for (std::size_t f : factors) p *= dims[f];
  return p;
}

void check_factor_list(const Dims& dims, const Dims& factors) {
  std::vector<bool> seen(dims.size(), false);
  for (std::size_t f : factors) {
    if (f >= dims.size() || seen[f]) {
      throw Error(ErrorCode::BadFactorIndex,
                  "factor index " + std::to_string(f) + " is out of range or repeated");
    }
    seen[f] = true;
  }
}

// M ← (A on the selected row factors) M.
template <class Mat, class Op>
void apply_left(Mat& m, const Dims& dims, const Dims& factors, const Op& a) {
  Split sp = split(dims, factors);
  const std::size_t ds = sp.sub.size();
  Mat block(ds, m.cols());
  for (std::size_t q : sp.rest) {
    for (std::size_t s = 0; s < ds; ++s) block.row(s) = m.row(q + sp.sub[s]);
    Mat out = a * block;
    for (std::size_t s = 0; s < ds; ++s) m.row(q + sp.sub[s]) = out.row(s);
  }
}

template <class Mat>
Mat permute_rows(const Mat& m, const Dims& dims, const Dims& perm, Dims& out_dims) {
  Dims map = offsets(dims, strides_of(dims), perm);
  Mat out(m.rows(), m.cols());
  for (std::size_t a = 0; a < map.size(); ++a) out.row(a) = m.row(map[a]);
  out_dims.clear();
  for (std::size_t p : perm) out_dims.push_back(dims[p]);
  return out;
}

bool is_permutation(const Dims& perm, std::size_t n) {
  if (perm.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

ProcMorphism::ProcMorphism(ProcObject dom, ProcObject cod, std::vector<Step> steps)
    : dom_(std::move(dom)), cod_(std::move(cod)), steps_(std::move(steps)) {
  if (dom_.backend() != cod_.backend()) {
    throw Error(ErrorCode::BackendMismatch, "domain and codomain use different backends");
  }
  const bool quantum = dom_.backend() == Backend::Quantum;
  Dims dims = dom_.factors();
  for (const Step& st : steps_) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, step::Unitary> || std::is_same_v<T, step::Kraus> ||
                        std::is_same_v<T, step::Stochastic>) {
            constexpr bool is_classical = std::is_same_v<T, step::Stochastic>;
            if (quantum == is_classical) {
              throw Error(ErrorCode::BackendMismatch, "step does not belong to the backend");
            }
            check_factor_list(dims, s.factors);
            const auto n = static_cast<Eigen::Index>(product(dims, s.factors));
            if constexpr (std::is_same_v<T, step::Kraus>) {
              if (s.ops.empty()) throw Error(ErrorCode::ShapeMismatch, "empty Kraus family");
              for (const CMatrix& k : s.ops) {
                if (k.rows() != n || k.cols() != n) {
                  throw Error(ErrorCode::ShapeMismatch, "Kraus operator does not fit its factors");
                }
              }
            } else {
              if (s.matrix.rows() != n || s.matrix.cols() != n) {
                throw Error(ErrorCode::ShapeMismatch, "matrix does not fit its factors");
              }
            }
          } else if constexpr (std::is_same_v<T, step::Discard>) {
            check_factor_list(dims, s.factors);
            dims = split(dims, s.factors).rest_dims;
          } else {
            if (!is_permutation(s.perm, dims.size())) {
              throw Error(ErrorCode::BadFactorIndex, "not a permutation of the factors");
            }
            Dims next;
            for (std::size_t p : s.perm) next.push_back(dims[p]);
            dims = std::move(next);
          }
        },
        st);
  }
  if (dims != cod_.factors()) {
    throw Error(ErrorCode::ShapeMismatch, "program does not end on the codomain");
  }
}

namespace {

bool step_equal(const Step& a, const Step& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, step::Permute>) {
          return x.perm == y.perm;
        } else if constexpr (std::is_same_v<T, step::Discard>) {
          return x.factors == y.factors;
        } else if constexpr (std::is_same_v<T, step::Kraus>) {
          if (x.factors != y.factors || x.ops.size() != y.ops.size()) return false;
          for (std::size_t k = 0; k < x.ops.size(); ++k) {
            if (x.ops[k] != y.ops[k]) return false;
          }
          return true;
        } else {
          return x.factors == y.factors && x.matrix == y.matrix;
        }
      },
      a);
}

}  // namespace

bool operator==(const ProcMorphism& a, const ProcMorphism& b) {
  if (!(a.dom_ == b.dom_) || !(a.cod_ == b.cod_) || a.steps_.size() != b.steps_.size()) return false;
  for (std::size_t i = 0; i < a.steps_.size(); ++i) {
    if (!step_equal(a.steps_[i], b.steps_[i])) return false;
  }
  return true;
}

ProcMorphism compose(const ProcMorphism& g, const ProcMorphism& f) {
  if (f.backend() != g.backend()) {
    throw Error(ErrorCode::BackendMismatch, "cannot compose across backends");
  }
  if (!(f.cod() == g.dom())) throw Error(ErrorCode::ShapeMismatch, "cod(f) differs from dom(g)");
  std::vector<Step> steps = f.steps();
  steps.insert(steps.end(), g.steps().begin(), g.steps().end());
  return ProcMorphism(f.dom(), g.cod(), std::move(steps));
}

namespace {

Step shifted(const Step& st, std::size_t offset, std::size_t head, std::size_t tail) {
  return std::visit(
      [&](const auto& s) -> Step {
        using T = std::decay_t<decltype(s)>;
        T out = s;
        if constexpr (std::is_same_v<T, step::Permute>) {
          Dims perm(head);
          std::iota(perm.begin(), perm.end(), 0);
          for (std::size_t p : s.perm) perm.push_back(p + offset);
          for (std::size_t i = 0; i < tail; ++i) perm.push_back(head + s.perm.size() + i);
          out.perm = std::move(perm);
        } else {
          for (auto& f : out.factors) f += offset;
        }
        return out;
      },
      st);
}

}  // namespace

ProcMorphism tensor_mor(const ProcMorphism& f, const ProcMorphism& g) {
  if (f.backend() != g.backend()) {
    throw Error(ErrorCode::BackendMismatch, "cannot tensor morphisms of different backends");
  }
  std::vector<Step> steps;
  // f runs first on the leading factors, with dom(g) parked behind it; its
  // permutations leave the parked factors in place.
  const std::size_t parked = g.dom().arity();
  for (const Step& st : f.steps()) steps.push_back(shifted(st, 0, 0, parked));
  const std::size_t head = f.cod().arity();
  for (const Step& st : g.steps()) steps.push_back(shifted(st, head, head, 0));
  return ProcMorphism(tensor_obj(f.dom(), g.dom()), tensor_obj(f.cod(), g.cod()), std::move(steps));
}

ProcMorphism discard(const ProcObject& a, const std::vector<std::size_t>& which) {
  check_factor_list(a.factors(), which);
  Dims rest = split(a.factors(), which).rest_dims;
  std::vector<Step> steps;
  if (!which.empty()) steps.push_back(step::Discard{which});
  return ProcMorphism(a, ProcObject(a.backend(), std::move(rest)), std::move(steps));
}

ProcMorphism discard_all(const ProcObject& a) {
  Dims all(a.arity());
  std::iota(all.begin(), all.end(), 0);
  return discard(a, all);
}

ProcMorphism unitary_channel(const ProcObject& a, const std::vector<std::size_t>& factors,
                             const CMatrix& u, double tol) {
  if (a.backend() != Backend::Quantum) {
    throw Error(ErrorCode::BackendMismatch, "unitary channels need the quantum backend");
  }
  check_factor_list(a.factors(), factors);
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != product(a.factors(), factors)) {
    throw Error(ErrorCode::ShapeMismatch, "unitary does not fit its factors");
  }
  const double dev =
      (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= tol)) {
    throw Error(ErrorCode::NotUnitary, "‖U†U - I‖ = " + std::to_string(dev));
  }
  return ProcMorphism(a, a, {step::Unitary{factors, u}});
}

ProcMorphism kraus_channel(const ProcObject& a, const std::vector<std::size_t>& factors,
                           const std::vector<CMatrix>& ops) {
  return ProcMorphism(a, a, {step::Kraus{factors, ops}});
}

ProcMorphism stochastic_map(const ProcObject& a, const std::vector<std::size_t>& factors,
                            const RMatrix& m) {
  if (m.size() > 0 && m.minCoeff() < 0) {
    throw Error(ErrorCode::BadParams, "stochastic matrix has negative entries");
  }
  return ProcMorphism(a, a, {step::Stochastic{factors, m}});
}

ProcMorphism permutation(const ProcObject& a, const std::vector<std::size_t>& perm) {
  if (!is_permutation(perm, a.arity())) {
    throw Error(ErrorCode::BadFactorIndex, "not a permutation of the factors");
  }
  Dims out;
  for (std::size_t p : perm) out.push_back(a.factors()[p]);
  return ProcMorphism(a, ProcObject(a.backend(), std::move(out)), {step::Permute{perm}});
}

// ---------------------------------------------------------------------------

ProcState::ProcState(ProcObject obj, CMatrix rho) : obj_(std::move(obj)), rho_(std::move(rho)) {
  const auto d = static_cast<Eigen::Index>(obj_.dim());
  if (obj_.backend() != Backend::Quantum) {
    throw Error(ErrorCode::BackendMismatch, "density operator on a classical object");
  }
  if (rho_.rows() != d || rho_.cols() != d) {
    throw Error(ErrorCode::ShapeMismatch, "density operator does not match the object");
  }
}

ProcState::ProcState(ProcObject obj, RVector p) : obj_(std::move(obj)), p_(std::move(p)) {
  if (obj_.backend() != Backend::Classical) {
    throw Error(ErrorCode::BackendMismatch, "probability vector on a quantum object");
  }
  if (p_.size() != static_cast<Eigen::Index>(obj_.dim())) {
    throw Error(ErrorCode::ShapeMismatch, "probability vector does not match the object");
  }
}

ProcState ProcState::pure(const ProcObject& obj, const CVector& psi) {
  return ProcState(obj, CMatrix(psi * psi.adjoint()));
}

ProcState ProcState::basis(const ProcObject& obj, std::size_t index) {
  const auto d = static_cast<Eigen::Index>(obj.dim());
  if (index >= obj.dim()) throw Error(ErrorCode::ShapeMismatch, "basis index out of range");
  if (obj.backend() == Backend::Quantum) {
    CMatrix rho = CMatrix::Zero(d, d);
    rho(index, index) = 1.0;
    return ProcState(obj, std::move(rho));
  }
  RVector p = RVector::Zero(d);
  p(index) = 1.0;
  return ProcState(obj, std::move(p));
}

double ProcState::trace() const {
  return backend() == Backend::Quantum ? rho_.trace().real() : p_.sum();
}

bool ProcState::is_valid(double tol) const {
  if (backend() == Backend::Classical) return p_.size() == 0 || p_.minCoeff() >= -tol;
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

ProcState tensor_state(const ProcState& a, const ProcState& b) {
  ProcObject obj = tensor_obj(a.object(), b.object());
  if (obj.backend() == Backend::Quantum) {
    const CMatrix& x = a.density();
    const CMatrix& y = b.density();
    CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
      }
    }
    return ProcState(std::move(obj), std::move(out));
  }
  const RVector& x = a.probabilities();
  const RVector& y = b.probabilities();
  RVector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return ProcState(std::move(obj), std::move(out));
}

double state_distance(const ProcState& a, const ProcState& b) {
  if (!(a.object() == b.object())) throw Error(ErrorCode::ShapeMismatch, "states on different objects");
  if (a.backend() == Backend::Quantum) {
    if (a.density().size() == 0) return 0.0;
    return (a.density() - b.density()).cwiseAbs().maxCoeff();
  }
  if (a.probabilities().size() == 0) return 0.0;
  return (a.probabilities() - b.probabilities()).cwiseAbs().maxCoeff();
}

ProcState apply(const ProcMorphism& f, const ProcState& state) {
  if (!(state.object() == f.dom())) {
    throw Error(ErrorCode::ShapeMismatch, "state does not live on the domain");
  }
  Dims dims = f.dom().factors();
  if (f.backend() == Backend::Quantum) {
    CMatrix rho = state.density();
    auto conjugate = [&](const CMatrix& op, const Dims& fac) {
      CMatrix m = rho;
      apply_left(m, dims, fac, op);
      CMatrix mt = m.adjoint();
      apply_left(mt, dims, fac, op);
      return CMatrix(mt.adjoint());
    };
    for (const Step& st : f.steps()) {
      if (const auto* u = std::get_if<step::Unitary>(&st)) {
        rho = conjugate(u->matrix, u->factors);
      } else if (const auto* k = std::get_if<step::Kraus>(&st)) {
        CMatrix acc = CMatrix::Zero(rho.rows(), rho.cols());
        for (const CMatrix& op : k->ops) acc += conjugate(op, k->factors);
        rho = std::move(acc);
      } else if (const auto* d = std::get_if<step::Discard>(&st)) {
        Split sp = split(dims, d->factors);
        const auto r = static_cast<Eigen::Index>(sp.rest.size());
        CMatrix out = CMatrix::Zero(r, r);
        for (Eigen::Index i = 0; i < r; ++i) {
          for (Eigen::Index j = 0; j < r; ++j) {
            Complex acc = 0.0;
            for (std::size_t s : sp.sub) acc += rho(sp.rest[i] + s, sp.rest[j] + s);
            out(i, j) = acc;
          }
        }
        rho = std::move(out);
        dims = std::move(sp.rest_dims);
      } else if (const auto* p = std::get_if<step::Permute>(&st)) {
        Dims map = offsets(dims, strides_of(dims), p->perm);
        const auto n = static_cast<Eigen::Index>(map.size());
        CMatrix out(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
          for (Eigen::Index j = 0; j < n; ++j) out(i, j) = rho(map[i], map[j]);
        }
        rho = std::move(out);
        Dims next;
        for (std::size_t q : p->perm) next.push_back(dims[q]);
        dims = std::move(next);
      }
    }
    return ProcState(f.cod(), std::move(rho));
  }

  RMatrix p = state.probabilities();
  for (const Step& st : f.steps()) {
    if (const auto* s = std::get_if<step::Stochastic>(&st)) {
      apply_left(p, dims, s->factors, s->matrix);
    } else if (const auto* d = std::get_if<step::Discard>(&st)) {
      Split sp = split(dims, d->factors);
      RMatrix out = RMatrix::Zero(static_cast<Eigen::Index>(sp.rest.size()), 1);
      for (std::size_t i = 0; i < sp.rest.size(); ++i) {
        for (std::size_t off : sp.sub) out(i, 0) += p(sp.rest[i] + off, 0);
      }
      p = std::move(out);
      dims = std::move(sp.rest_dims);
    } else if (const auto* q = std::get_if<step::Permute>(&st)) {
      Dims next;
      p = permute_rows(p, dims, q->perm, next);
      dims = std::move(next);
    }
  }
  return ProcState(f.cod(), RVector(p.col(0)));
}

// ---------------------------------------------------------------------------
// Basis sweeps. A quantum morphism is run on all input basis vectors at once
// through a Stinespring dilation: the working matrix V has one row per
// output index and one column per (environment index, input index), with
// the input index varying fastest. Then f(|i⟩⟨j|) = Σ_e V[·, eD+i] V[·, eD+j]†.

namespace {

CMatrix dilation(const ProcMorphism& f) {
  const auto d_in = static_cast<Eigen::Index>(f.dom().dim());
  Dims dims = f.dom().factors();
  CMatrix v = CMatrix::Identity(d_in, d_in);
  for (const Step& st : f.steps()) {
    if (const auto* u = std::get_if<step::Unitary>(&st)) {
      apply_left(v, dims, u->factors, u->matrix);
    } else if (const auto* k = std::get_if<step::Kraus>(&st)) {
      const Eigen::Index cols = v.cols();
      CMatrix out(v.rows(), cols * static_cast<Eigen::Index>(k->ops.size()));
      for (std::size_t r = 0; r < k->ops.size(); ++r) {
        CMatrix branch = v;
        apply_left(branch, dims, k->factors, k->ops[r]);
        out.middleCols(static_cast<Eigen::Index>(r) * cols, cols) = branch;
      }
      v = std::move(out);
    } else if (const auto* d = std::get_if<step::Discard>(&st)) {
      Split sp = split(dims, d->factors);
      const Eigen::Index cols = v.cols();
      CMatrix out(static_cast<Eigen::Index>(sp.rest.size()),
                  cols * static_cast<Eigen::Index>(sp.sub.size()));
      for (std::size_t q = 0; q < sp.rest.size(); ++q) {
        for (std::size_t s = 0; s < sp.sub.size(); ++s) {
          out.row(q).segment(static_cast<Eigen::Index>(s) * cols, cols) = v.row(sp.rest[q] + sp.sub[s]);
        }
      }
      v = std::move(out);
      dims = std::move(sp.rest_dims);
    } else if (const auto* p = std::get_if<step::Permute>(&st)) {
      Dims next;
      v = permute_rows(v, dims, p->perm, next);
      dims = std::move(next);
    }
  }
  return v;
}

// Rows (output o, input i) as o*D + i, one column per environment index.
CMatrix choi_factor(const ProcMorphism& f) {
  CMatrix v = dilation(f);
  const auto d_in = static_cast<Eigen::Index>(f.dom().dim());
  const Eigen::Index env = v.cols() / d_in;
  CMatrix r(v.rows() * d_in, env);
  for (Eigen::Index o = 0; o < v.rows(); ++o) {
    for (Eigen::Index e = 0; e < env; ++e) {
      r.block(o * d_in, e, d_in, 1) = v.row(o).segment(e * d_in, d_in).transpose();
    }
  }
  return r;
}

RMatrix stochastic_matrix(const ProcMorphism& f) {
  const auto d_in = static_cast<Eigen::Index>(f.dom().dim());
  Dims dims = f.dom().factors();
  RMatrix m = RMatrix::Identity(d_in, d_in);
  for (const Step& st : f.steps()) {
    if (const auto* s = std::get_if<step::Stochastic>(&st)) {
      apply_left(m, dims, s->factors, s->matrix);
    } else if (const auto* d = std::get_if<step::Discard>(&st)) {
      Split sp = split(dims, d->factors);
      RMatrix out = RMatrix::Zero(static_cast<Eigen::Index>(sp.rest.size()), d_in);
      for (std::size_t i = 0; i < sp.rest.size(); ++i) {
        for (std::size_t off : sp.sub) out.row(i) += m.row(sp.rest[i] + off);
      }
      m = std::move(out);
      dims = std::move(sp.rest_dims);
    } else if (const auto* p = std::get_if<step::Permute>(&st)) {
      Dims next;
      m = permute_rows(m, dims, p->perm, next);
      dims = std::move(next);
    }
  }
  return m;
}

}  // namespace

bool is_normalised(const ProcMorphism& f, double tol) {
  const auto d_in = static_cast<Eigen::Index>(f.dom().dim());
  if (f.backend() == Backend::Classical) {
    RMatrix m = stochastic_matrix(f);
    RVector sums = m.colwise().sum().transpose();
    return (sums - RVector::Ones(d_in)).cwiseAbs().maxCoeff() <= tol;
  }
  CMatrix v = dilation(f);
  const Eigen::Index env = v.cols() / d_in;
  CMatrix b(v.rows() * env, d_in);
  for (Eigen::Index e = 0; e < env; ++e) b.middleRows(e * v.rows(), v.rows()) = v.middleCols(e * d_in, d_in);
  CMatrix gram = b.adjoint() * b;
  return (gram - CMatrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff() <= tol;
}

double morphism_deviation(const ProcMorphism& f, const ProcMorphism& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) {
    throw Error(ErrorCode::ShapeMismatch, "morphisms have different domains or codomains");
  }
  if (f.backend() == Backend::Classical) {
    RMatrix a = stochastic_matrix(f);
    RMatrix b = stochastic_matrix(g);
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
  }
  const CMatrix rf = choi_factor(f);
  const CMatrix rg = choi_factor(g);
  // J_f - J_g = M S M† with M = [R_f R_g] and S = diag(I, -I). With M = Q T
  // the difference is Q (T S T†) Q†, which has the Frobenius norm of T S T†.
  CMatrix m(rf.rows(), rf.cols() + rg.cols());
  m << rf, rg;
  if (m.size() == 0) return 0.0;
  Eigen::HouseholderQR<CMatrix> qr(m);
  const Eigen::Index k = std::min(m.rows(), m.cols());
  const CMatrix t = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  CMatrix diff = t.leftCols(rf.cols()) * t.leftCols(rf.cols()).adjoint();
  diff.noalias() -= t.rightCols(rg.cols()) * t.rightCols(rg.cols()).adjoint();
  return diff.norm();
}

bool morphisms_equal(const ProcMorphism& f, const ProcMorphism& g, double tol) {
  return morphism_deviation(f, g) <= tol;
}

CMatrix choi_matrix(const ProcMorphism& f) {
  if (f.backend() != Backend::Quantum) {
    throw Error(ErrorCode::BackendMismatch, "Choi matrices need the quantum backend");
  }
  const std::size_t din = f.dom().dim();
  const std::size_t dout = f.cod().dim();
  if (din > 8 || dout > 8) throw Error(ErrorCode::BadParams, "Choi check limited to dimension 8");
  const auto di = static_cast<Eigen::Index>(din);
  const auto dn = static_cast<Eigen::Index>(dout);
  CMatrix j = CMatrix::Zero(di * dn, di * dn);
  for (Eigen::Index a = 0; a < di; ++a) {
    for (Eigen::Index b = 0; b < di; ++b) {
      CMatrix e = CMatrix::Zero(di, di);
      e(a, b) = 1.0;
      // apply is linear, so it accepts non-positive inputs as well.
      ProcState out = apply(f, ProcState(f.dom(), e));
      j.block(a * dn, b * dn, dn, dn) = out.density();
    }
  }
  return j;
}

bool is_completely_positive(const ProcMorphism& f, double tol) {
  CMatrix j = choi_matrix(f);
  if (j.size() == 0) return true;
  if ((j - j.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(j, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace cft
