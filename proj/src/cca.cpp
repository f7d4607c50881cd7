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

#include "cft/cca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "cft/error.hpp"
#include "cft/parallel.hpp"

namespace cft {

namespace {

constexpr std::size_t kMaxScatteringDim = 4096;
constexpr std::size_t kMaxObjects = std::size_t{1} << 20;

std::size_t arity_per_event(int d) { return std::size_t{1} << d; }

void check_scattering(const PartitionedCCAConfig& c, const Scattering& s, const std::string& what) {
  const auto n = static_cast<Eigen::Index>(scattering_dim(c));
  auto fits = [&](Eigen::Index r, Eigen::Index k) {
    if (r != n || k != n) {
      throw Error(ErrorCode::BadConfig, what + " must be " + std::to_string(n) + "x" + std::to_string(n));
    }
  };
  if (const auto* u = std::get_if<CMatrix>(&s)) {
    if (c.backend != Backend::Quantum) throw Error(ErrorCode::BadConfig, what + ": unitary on a classical backend");
    fits(u->rows(), u->cols());
    if ((u->adjoint() * *u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > kValidityTol) {
      throw Error(ErrorCode::BadConfig, what + " is not unitary");
    }
  } else if (const auto* ks = std::get_if<std::vector<CMatrix>>(&s)) {
    if (c.backend != Backend::Quantum) throw Error(ErrorCode::BadConfig, what + ": Kraus operators on a classical backend");
    if (ks->empty()) throw Error(ErrorCode::BadConfig, what + " has no Kraus operators");
    CMatrix sum = CMatrix::Zero(n, n);
    for (const CMatrix& k : *ks) {
      fits(k.rows(), k.cols());
      sum += k.adjoint() * k;
    }
    if ((sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > kValidityTol) {
      throw Error(ErrorCode::BadConfig, what + " is not trace preserving");
    }
  } else {
    const RMatrix& m = std::get<RMatrix>(s);
    if (c.backend != Backend::Classical) throw Error(ErrorCode::BadConfig, what + ": stochastic matrix on a quantum backend");
    fits(m.rows(), m.cols());
    if (m.minCoeff() < -kValidityTol ||
        (m.colwise().sum().transpose() - RVector::Ones(n)).cwiseAbs().maxCoeff() > kValidityTol) {
      throw Error(ErrorCode::BadConfig, what + " is not column stochastic");
    }
  }
}

Step scattering_step(const Scattering& s, std::vector<std::size_t> factors) {
  if (const auto* u = std::get_if<CMatrix>(&s)) return step::Unitary{std::move(factors), *u};
  if (const auto* ks = std::get_if<std::vector<CMatrix>>(&s)) return step::Kraus{std::move(factors), *ks};
  return step::Stochastic{std::move(factors), std::get<RMatrix>(s)};
}

std::vector<std::size_t> block(std::size_t event, std::size_t n) {
  std::vector<std::size_t> f(n);
  std::iota(f.begin(), f.end(), event * n);
  return f;
}

Coord add(const Coord& a, const Coord& b, int sign) {
  Coord out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + sign * b[i];
  return out;
}

std::size_t index_in(const std::vector<Coord>& sorted, const Coord& x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) return SIZE_MAX;
  return static_cast<std::size_t>(it - sorted.begin());
}

bool cone_contained(const DiamondLattice& lattice, const std::vector<Coord>& inner, int k,
                    const std::vector<Coord>& outer) {
  const auto cone = cone_sites(lattice, inner, k);
  return std::includes(outer.begin(), outer.end(), cone.begin(), cone.end());
}

// Discards the listed factors (if any), then permutes so that output i is
// the kept factor originally at position order[i].
void route(std::vector<Step>& steps, std::size_t total, const std::vector<bool>& keep,
           const std::vector<std::size_t>& order) {
  std::vector<std::size_t> dropped;
  std::vector<std::size_t> position(total, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t i = 0; i < total; ++i) {
    if (keep[i]) {
      position[i] = next++;
    } else {
      dropped.push_back(i);
    }
  }
  if (!dropped.empty()) steps.push_back(step::Discard{dropped});
  std::vector<std::size_t> perm;
  perm.reserve(order.size());
  bool trivial = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    perm.push_back(position[order[i]]);
    trivial = trivial && perm.back() == i;
  }
  if (!trivial) steps.push_back(step::Permute{perm});
}

}  // namespace

std::size_t scattering_dim(const PartitionedCCAConfig& config) {
  if (config.d < 1 || config.d > 8 || config.cell_dim < 1) {
    throw Error(ErrorCode::BadConfig, "need 1 <= d <= 8 and a non-empty cell");
  }
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity_per_event(config.d); ++i) {
    n *= config.cell_dim;
    if (n > kMaxScatteringDim) throw Error(ErrorCode::BadConfig, "scattering space too large");
  }
  return n;
}

void validate_config(const PartitionedCCAConfig& config) {
  scattering_dim(config);
  check_scattering(config, config.U, "U");
  if (config.U_inv) check_scattering(config, *config.U_inv, "U_inv");
  for (const auto& [event, s] : config.overrides) {
    if (static_cast<int>(event.x.size()) != config.d) {
      throw Error(ErrorCode::BadConfig, "override at an event of the wrong dimension");
    }
    check_scattering(config, s, "U at " + to_string(event));
  }
}

// ---------------------------------------------------------------------------

LatticeSlice make_lattice_slice(const DiamondLattice& lattice, int t, std::vector<Coord> x) {
  for (Coord& c : x) {
    if (static_cast<int>(c.size()) != lattice.dim()) {
      throw Error(ErrorCode::BadParams, "site has the wrong number of coordinates");
    }
    for (int v : c) {
      if (((v - t) % 2 + 2) % 2 != 0) {
        throw Error(ErrorCode::BadParams, "site parity does not match the time");
      }
    }
    c = lattice.wrap(std::move(c));
  }
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return LatticeSlice{t, std::move(x)};
}

std::string to_string(const LatticeSlice& s) {
  std::string out = "t=" + std::to_string(s.t) + " {";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (i > 0) out += " ";
    out += "(";
    for (std::size_t j = 0; j < s.x[i].size(); ++j) {
      if (j > 0) out += ",";
      out += std::to_string(s.x[i][j]);
    }
    out += ")";
  }
  return out + "}";
}

std::vector<Coord> neighbour_sites(const DiamondLattice& lattice, const std::vector<Coord>& x) {
  return cone_sites(lattice, x, 1);
}

std::vector<Coord> cone_sites(const DiamondLattice& lattice, const std::vector<Coord>& x, int k) {
  const auto shifts = iterated_neighbourhood(k, lattice.dim());
  std::vector<Coord> out;
  out.reserve(x.size() * shifts.size());
  for (const Coord& c : x) {
    for (const Coord& s : shifts) out.push_back(lattice.wrap(add(c, s, 1)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool lattice_slice_leq(const DiamondLattice& lattice, const LatticeSlice& a, const LatticeSlice& b) {
  const int k = b.t - a.t;
  if (k < 0) throw Error(ErrorCode::NegativeTimeGap, "target slice lies before the source");
  return cone_contained(lattice, b.x, k, a.x);
}

std::vector<ElementaryMorphism> factorize_morphism(const DiamondLattice& lattice,
                                                   const LatticeSlice& a, const LatticeSlice& b) {
  using Kind = ElementaryMorphism::Kind;
  if (b.empty()) return {{Kind::Restriction, a, LatticeSlice{a.t, {}}}};
  if (a.empty() || b.t < a.t || !lattice_slice_leq(lattice, a, b)) {
    throw Error(ErrorCode::InvalidMorphism, "not a slice morphism: " + to_string(a) + " to " + to_string(b));
  }
  const int k = b.t - a.t;
  if (k == 0) return {{Kind::Restriction, a, b}};
  std::vector<std::vector<Coord>> sites(static_cast<std::size_t>(k) + 1);
  sites[static_cast<std::size_t>(k)] = b.x;
  for (int i = k - 1; i >= 0; --i) {
    sites[static_cast<std::size_t>(i)] = neighbour_sites(lattice, sites[static_cast<std::size_t>(i) + 1]);
  }
  std::vector<ElementaryMorphism> out;
  LatticeSlice current = a;
  for (int i = 0; i < k; ++i) {
    LatticeSlice kept{a.t + i, sites[static_cast<std::size_t>(i)]};
    out.push_back({Kind::Restriction, current, kept});
    LatticeSlice next{a.t + i + 1, sites[static_cast<std::size_t>(i) + 1]};
    out.push_back({Kind::OneStep, kept, next});
    current = next;
  }
  return out;
}

ProcObject cca_object(const PartitionedCCAConfig& config, std::size_t events) {
  return ProcObject(config.backend,
                    std::vector<std::size_t>(events * arity_per_event(config.d), config.cell_dim));
}

ProcMorphism restriction_kernel(const PartitionedCCAConfig& config, const LatticeSlice& x,
                                const LatticeSlice& y) {
  if (!y.empty() && (y.t != x.t || !std::includes(x.x.begin(), x.x.end(), y.x.begin(), y.x.end()))) {
    throw Error(ErrorCode::NotSubset, "restriction target is not a subset of the source");
  }
  const std::size_t n = arity_per_event(config.d);
  const ProcObject dom = cca_object(config, x.size());
  std::vector<std::size_t> which;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (index_in(y.x, x.x[j]) == SIZE_MAX) {
      for (std::size_t f : block(j, n)) which.push_back(f);
    }
  }
  if (which.empty()) return ProcMorphism::identity(dom);
  return discard(dom, which);
}

ProcMorphism one_step_kernel(const PartitionedCCAConfig& config, const DiamondLattice& lattice,
                             const LatticeSlice& y, const LatticeSlice& x) {
  if (x.empty() && y.empty()) return ProcMorphism::identity(cca_object(config, 0));
  if (y.t + 1 != x.t || y.x != neighbour_sites(lattice, x.x)) {
    throw Error(ErrorCode::WrongPredecessorSet,
                to_string(y) + " is not the predecessor set of " + to_string(x));
  }
  const std::size_t n = arity_per_event(config.d);
  const auto& nbhd = neighbourhood(config.d);
  std::vector<Step> steps;
  for (std::size_t j = 0; j < y.size(); ++j) {
    auto o = config.overrides.find(LatticeEvent{y.t, y.x[j]});
    const Scattering& s = o == config.overrides.end() ? config.U : o->second;
    steps.push_back(scattering_step(s, block(j, n)));
  }
  std::vector<bool> keep(y.size() * n);
  for (std::size_t j = 0; j < y.size(); ++j) {
    for (std::size_t a = 0; a < n; ++a) {
      keep[j * n + a] = index_in(x.x, lattice.wrap(add(y.x[j], nbhd[a], -1))) != SIZE_MAX;
    }
  }
  std::vector<std::size_t> order;
  for (const Coord& site : x.x) {
    for (std::size_t a = 0; a < n; ++a) {
      order.push_back(index_in(y.x, lattice.wrap(add(site, nbhd[a], 1))) * n + a);
    }
  }
  route(steps, keep.size(), keep, order);
  return ProcMorphism(cca_object(config, y.size()), cca_object(config, x.size()), std::move(steps));
}

ProcMorphism reverse_step_kernel(const PartitionedCCAConfig& config, const DiamondLattice& lattice,
                                 const LatticeSlice& x, const LatticeSlice& y) {
  if (!config.U_inv) throw Error(ErrorCode::BadConfig, "reverse evolution needs U_inv");
  if (x.empty() && y.empty()) return ProcMorphism::identity(cca_object(config, 0));
  if (y.t + 1 != x.t || x.x != neighbour_sites(lattice, y.x)) {
    throw Error(ErrorCode::WrongPredecessorSet,
                to_string(x) + " is not the successor set of " + to_string(y));
  }
  const std::size_t n = arity_per_event(config.d);
  const auto& nbhd = neighbourhood(config.d);
  std::vector<Step> steps;
  std::vector<bool> keep(x.size() * n);
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t a = 0; a < n; ++a) {
      keep[j * n + a] = index_in(y.x, lattice.wrap(add(x.x[j], nbhd[a], 1))) != SIZE_MAX;
    }
  }
  std::vector<std::size_t> order;
  for (const Coord& site : y.x) {
    for (std::size_t a = 0; a < n; ++a) {
      order.push_back(index_in(x.x, lattice.wrap(add(site, nbhd[a], -1))) * n + a);
    }
  }
  route(steps, keep.size(), keep, order);
  for (std::size_t j = 0; j < y.size(); ++j) steps.push_back(scattering_step(*config.U_inv, block(j, n)));
  return ProcMorphism(cca_object(config, x.size()), cca_object(config, y.size()), std::move(steps));
}

// ---------------------------------------------------------------------------

PartitionedCCA::PartitionedCCA(PartitionedCCAConfig config, DiamondLattice lattice)
    : config_(std::move(config)), lattice_(std::move(lattice)) {
  validate_config(config_);
  if (lattice_.dim() != config_.d) {
    throw Error(ErrorCode::BadParams, "lattice and automaton disagree on the dimension");
  }
}

ProcObject PartitionedCCA::object(const LatticeSlice& s) const { return cca_object(config_, s.size()); }

bool PartitionedCCA::leads_to(const LatticeSlice& a, const LatticeSlice& b) const {
  if (b.empty()) return true;
  if (a.empty() || b.t < a.t) return false;
  return lattice_slice_leq(lattice_, a, b);
}

ProcMorphism PartitionedCCA::morphism(const LatticeSlice& a, const LatticeSlice& b) const {
  ProcMorphism out = ProcMorphism::identity(object(a));
  for (const ElementaryMorphism& e : factorize_morphism(lattice_, a, b)) {
    if (e.kind == ElementaryMorphism::Kind::Restriction) {
      out = compose(restriction_kernel(config_, e.from, e.to), out);
    } else {
      out = compose(one_step_kernel(config_, lattice_, e.from, e.to), out);
    }
  }
  return out;
}

bool PartitionedCCA::reverse_leads_to(const LatticeSlice& a, const LatticeSlice& b) const {
  if (b.empty()) return true;
  if (a.empty() || b.t > a.t) return false;
  return cone_contained(lattice_, b.x, a.t - b.t, a.x);
}

ProcMorphism PartitionedCCA::reverse_morphism(const LatticeSlice& a, const LatticeSlice& b) const {
  if (!config_.U_inv) throw Error(ErrorCode::BadConfig, "reverse evolution needs U_inv");
  if (!reverse_leads_to(a, b)) {
    throw Error(ErrorCode::InvalidMorphism,
                "not a reversed slice morphism: " + to_string(a) + " to " + to_string(b));
  }
  if (b.empty()) return restriction_kernel(config_, a, LatticeSlice{a.t, {}});
  const int k = a.t - b.t;
  std::vector<std::vector<Coord>> sites(static_cast<std::size_t>(k) + 1);
  sites[static_cast<std::size_t>(k)] = b.x;
  for (int i = k - 1; i >= 0; --i) {
    sites[static_cast<std::size_t>(i)] = neighbour_sites(lattice_, sites[static_cast<std::size_t>(i) + 1]);
  }
  ProcMorphism out = restriction_kernel(config_, a, LatticeSlice{a.t, sites[0]});
  for (int i = 0; i < k; ++i) {
    LatticeSlice from{a.t - i, sites[static_cast<std::size_t>(i)]};
    LatticeSlice to{a.t - i - 1, sites[static_cast<std::size_t>(i) + 1]};
    out = compose(reverse_step_kernel(config_, lattice_, from, to), out);
  }
  return out;
}

// ---------------------------------------------------------------------------

LatticeSlice to_lattice_slice(const LatticeWindow& window, const EventSet& s) {
  LatticeSlice out;
  bool first = true;
  for (EventId id : members(s)) {
    const LatticeEvent& e = window.event(id);
    if (first) {
      out.t = e.t;
      first = false;
    } else if (e.t != out.t) {
      throw Error(ErrorCode::NotInCategory, "slice is not contained in one row");
    }
    out.x.push_back(e.x);
  }
  std::sort(out.x.begin(), out.x.end());
  return out;
}

EventSet to_event_set(const LatticeWindow& window, const LatticeSlice& s) {
  EventSet out = window.order().none();
  for (const Coord& x : s.x) out.set(window.id(LatticeEvent{s.t, x}));
  return out;
}

namespace {

bool in_one_row(const LatticeWindow& w, const EventSet& s) {
  int t = 0;
  bool first = true;
  for (EventId id : members(s)) {
    if (first) {
      t = w.event(id).t;
      first = false;
    } else if (w.event(id).t != t) {
      return false;
    }
  }
  return true;
}

SliceCategory::Spec cca_spec(std::shared_ptr<const LatticeWindow> window, const CCAWindowOptions& opts) {
  SliceCategory::Spec spec;
  const std::size_t max = opts.max_slice_size;
  spec.member = [window, max](const EventSet& s) { return s.count() <= max && in_one_row(*window, s); };
  spec.product = [window, max](const EventSet& a, const EventSet& b) {
    if (a.none() || b.none()) return true;
    if (a.intersects(b) || a.count() + b.count() > max) return false;
    return window->event(a.find_first()).t == window->event(b.find_first()).t;
  };
  spec.objects = [window, max] {
    std::vector<EventSet> out{window->order().none()};
    for (int t = window->window().t0; t <= window->window().t1; ++t) {
      const std::vector<EventId> row = members(window->row(t));
      const std::size_t limit = std::min(max, row.size());
      // Subsets of the row of each size up to the limit, by index choice.
      for (std::size_t k = 1; k <= limit; ++k) {
        std::vector<std::size_t> pick(k);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
          EventSet s = window->order().none();
          for (std::size_t i : pick) s.set(row[i]);
          out.push_back(std::move(s));
          if (out.size() > kMaxObjects) {
            throw Error(ErrorCode::NonEnumerableRegion, "too many slices in the window");
          }
          std::size_t i = k;
          while (i > 0 && pick[i - 1] == row.size() - k + i - 1) --i;
          if (i == 0) break;
          ++pick[i - 1];
          for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
      }
    }
    return out;
  };
  return spec;
}

}  // namespace

std::shared_ptr<const SliceCategory> cca_category(std::shared_ptr<const LatticeWindow> window,
                                                  const CCAWindowOptions& opts) {
  SliceCategory::Spec spec = cca_spec(window, opts);
  spec.name = "CCA";
  spec.leads_to = [window](const EventSet& a, const EventSet& b) {
    if (b.none()) return true;
    if (a.none()) return false;
    LatticeSlice sa = to_lattice_slice(*window, a);
    LatticeSlice sb = to_lattice_slice(*window, b);
    return sb.t >= sa.t && lattice_slice_leq(window->lattice(), sa, sb);
  };
  return std::make_shared<const SliceCategory>(window->order_ptr(), std::move(spec));
}

std::shared_ptr<const SliceCategory> cca_reverse_category(std::shared_ptr<const LatticeWindow> window,
                                                          const CCAWindowOptions& opts) {
  SliceCategory::Spec spec = cca_spec(window, opts);
  spec.name = "CCA^rev";
  spec.leads_to = [window](const EventSet& a, const EventSet& b) {
    if (b.none()) return true;
    if (a.none()) return false;
    LatticeSlice sa = to_lattice_slice(*window, a);
    LatticeSlice sb = to_lattice_slice(*window, b);
    return sb.t <= sa.t && cone_contained(window->lattice(), sb.x, sa.t - sb.t, sa.x);
  };
  auto reversed = std::make_shared<const FiniteOrder>(window->order().reversed());
  return std::make_shared<const SliceCategory>(reversed, std::move(spec));
}

Foliation row_foliation(const LatticeWindow& window) {
  Foliation f;
  for (int t = window.window().t0; t <= window.window().t1; ++t) f.leaves.push_back(window.row(t));
  return f;
}

namespace {

FieldTheory::Coherence cca_coherence(std::shared_ptr<const PartitionedCCA> cca,
                                     std::shared_ptr<const LatticeWindow> window) {
  return [cca, window](const EventSet& a, const EventSet& b) {
    const LatticeSlice sa = to_lattice_slice(*window, a);
    const LatticeSlice sb = to_lattice_slice(*window, b);
    const ProcObject dom = tensor_obj(cca->object(sa), cca->object(sb));
    const std::size_t n = arity_per_event(cca->config().d);
    std::vector<Coord> all = sa.x;
    all.insert(all.end(), sb.x.begin(), sb.x.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> perm;
    for (const Coord& x : all) {
      std::size_t base = index_in(sa.x, x);
      base = base != SIZE_MAX ? base * n : (sa.size() + index_in(sb.x, x)) * n;
      for (std::size_t a = 0; a < n; ++a) perm.push_back(base + a);
    }
    bool trivial = true;
    for (std::size_t i = 0; i < perm.size(); ++i) trivial = trivial && perm[i] == i;
    return trivial ? ProcMorphism::identity(dom) : permutation(dom, perm);
  };
}

std::shared_ptr<const FieldTheory> make_theory(std::shared_ptr<const PartitionedCCA> cca,
                                               std::shared_ptr<const LatticeWindow> window,
                                               std::shared_ptr<const SliceCategory> category,
                                               bool reverse) {
  auto objects = [cca, window](const EventSet& s) { return cca->object(to_lattice_slice(*window, s)); };
  FieldTheory::MorphismMap morphisms;
  if (reverse) {
    morphisms = [cca, window](const EventSet& a, const EventSet& b) {
      return cca->reverse_morphism(to_lattice_slice(*window, a), to_lattice_slice(*window, b));
    };
  } else {
    morphisms = [cca, window](const EventSet& a, const EventSet& b) {
      return cca->morphism(to_lattice_slice(*window, a), to_lattice_slice(*window, b));
    };
  }
  return std::make_shared<const FieldTheory>(std::move(category), cca->config().backend, objects,
                                             morphisms, cca_coherence(cca, window));
}

}  // namespace

std::shared_ptr<const FieldTheory> build_cca(const PartitionedCCAConfig& config,
                                             std::shared_ptr<const LatticeWindow> window,
                                             const CCAWindowOptions& opts) {
  auto cca = std::make_shared<const PartitionedCCA>(config, window->lattice());
  return make_theory(cca, window, cca_category(window, opts), false);
}

std::shared_ptr<const FieldTheory> build_reverse_theory(const PartitionedCCAConfig& config,
                                                        std::shared_ptr<const LatticeWindow> window,
                                                        const CCAWindowOptions& opts) {
  if (!config.U_inv) throw Error(ErrorCode::BadConfig, "reverse evolution needs U_inv");
  auto cca = std::make_shared<const PartitionedCCA>(config, window->lattice());
  return make_theory(cca, window, cca_reverse_category(window, opts), true);
}

Scattering inverse_scattering(const PartitionedCCAConfig& config) {
  scattering_dim(config);
  if (!config.overrides.empty()) {
    throw Error(ErrorCode::NotInvertible, "reversal of an inhomogeneous automaton is not supported");
  }
  Scattering inv;
  if (config.U_inv) {
    inv = *config.U_inv;
  } else if (const auto* u = std::get_if<CMatrix>(&config.U)) {
    inv = CMatrix(u->adjoint());
  } else if (const auto* ks = std::get_if<std::vector<CMatrix>>(&config.U)) {
    if (ks->size() != 1) throw Error(ErrorCode::NotInvertible, "a channel with several Kraus operators");
    inv = std::vector<CMatrix>{ks->front().adjoint()};
  } else {
    const RMatrix& m = std::get<RMatrix>(config.U);
    bool is_perm = true;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double v = m.data()[i];
      is_perm = is_perm && (v == 0.0 || v == 1.0);
    }
    if (!is_perm) throw Error(ErrorCode::NotInvertible, "a stochastic map that is not a permutation");
    inv = RMatrix(m.transpose());
  }
  PartitionedCCAConfig probe = config;
  probe.U_inv.reset();
  try {
    check_scattering(probe, inv, "U_inv");
  } catch (const Error& e) {
    throw Error(ErrorCode::NotInvertible, e.what());
  }
  const ProcObject cell = cca_object(config, 1);
  const ProcMorphism f(cell, cell, {scattering_step(config.U, block(0, cell.arity()))});
  const ProcMorphism g(cell, cell, {scattering_step(inv, block(0, cell.arity()))});
  const ProcMorphism id = ProcMorphism::identity(cell);
  if (!morphisms_equal(compose(g, f), id) || !morphisms_equal(compose(f, g), id)) {
    throw Error(ErrorCode::NotInvertible, "U_inv does not invert U");
  }
  return inv;
}

std::shared_ptr<const FieldTheory> build_reversal(const PartitionedCCAConfig& config,
                                                  std::shared_ptr<const LatticeWindow> window,
                                                  const CCAWindowOptions& opts) {
  PartitionedCCAConfig with_inverse = config;
  with_inverse.U_inv = inverse_scattering(config);
  return build_reverse_theory(with_inverse, std::move(window), opts);
}

// ---------------------------------------------------------------------------

std::string to_string(const SymmetryAction& action, const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (const Letter& l : w) {
    if (!out.empty()) out += " ";
    out += action.generators.at(l.generator).name;
    if (l.power < 0) out += "^-1";
  }
  return out;
}

std::vector<Word> words_up_to(const SymmetryAction& action, std::size_t max_len) {
  std::vector<Letter> letters;
  for (std::size_t g = 0; g < action.generators.size(); ++g) {
    letters.push_back({g, 1});
    letters.push_back({g, -1});
  }
  std::vector<Word> out;
  std::vector<Word> layer{Word{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (const Letter& l : letters) {
        Word v = w;
        v.push_back(l);
        next.push_back(std::move(v));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::optional<EventSet> act(const SymmetryAction& action, const Word& w, const EventSet& s) {
  EventSet current = s;
  for (const Letter& l : w) {
    const SymmetryGenerator& g = action.generators.at(l.generator);
    const auto& map = l.power > 0 ? g.image : g.inverse;
    EventSet next(current.size());
    for (EventId x : members(current)) {
      if (!map.at(x)) return std::nullopt;
      next.set(*map[x]);
    }
    current = std::move(next);
  }
  return current;
}

SymmetryAction permutation_action(std::shared_ptr<const FiniteOrder> order,
                                  const std::vector<std::vector<EventId>>& perms) {
  SymmetryAction action{"permutations", order, {}, false};
  const std::size_t n = order->size();
  for (std::size_t g = 0; g < perms.size(); ++g) {
    const auto& p = perms[g];
    std::vector<bool> hit(n, false);
    if (p.size() != n) throw Error(ErrorCode::BadParams, "permutation has the wrong length");
    SymmetryGenerator gen{"g" + std::to_string(g), std::vector<std::optional<EventId>>(n),
                          std::vector<std::optional<EventId>>(n)};
    for (EventId x = 0; x < n; ++x) {
      if (p[x] >= n || hit[p[x]]) throw Error(ErrorCode::BadParams, "not a permutation of the events");
      hit[p[x]] = true;
      gen.image[x] = p[x];
      gen.inverse[p[x]] = x;
    }
    action.generators.push_back(std::move(gen));
  }
  return action;
}

SymmetryAction lattice_translations(const LatticeWindow& window) {
  const DiamondLattice& lat = window.lattice();
  SymmetryAction action{"translations", window.order_ptr(), {}, true};
  for (const Coord& delta : neighbourhood(lat.dim())) {
    std::string name = "tau(";
    for (std::size_t i = 0; i < delta.size(); ++i) name += (i ? "," : "") + std::to_string(delta[i]);
    SymmetryGenerator gen{name + ")", std::vector<std::optional<EventId>>(window.size()),
                          std::vector<std::optional<EventId>>(window.size())};
    for (EventId id = 0; id < window.size(); ++id) {
      const LatticeEvent& e = window.event(id);
      gen.image[id] = window.find(LatticeEvent{e.t + 1, lat.wrap(add(e.x, delta, -1))});
      gen.inverse[id] = window.find(LatticeEvent{e.t - 1, lat.wrap(add(e.x, delta, 1))});
    }
    action.generators.push_back(std::move(gen));
  }
  return action;
}

namespace {

template <class T>
std::vector<T> sample_of(std::vector<T> all, std::size_t count, std::mt19937_64& rng) {
  if (count == 0 || all.size() <= count) return all;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  return all;
}

}  // namespace

Report check_symmetry_action(const SymmetryAction& action, const SliceCategory& c,
                             const SymmetryCheckOptions& opts) {
  Report report("symmetry");
  const FiniteOrder& order = c.order();
  auto names = [&](const EventSet& s) { return order.names_of(s); };
  std::mt19937_64 rng(opts.seed);

  for (const SymmetryGenerator& g : action.generators) {
    nlohmann::json bad;
    for (EventId x = 0; x < order.size() && bad.is_null(); ++x) {
      if (!g.image[x]) continue;
      if (g.inverse[*g.image[x]] != x) {
        bad = {{"event", order.name(x)}, {"problem", "inverse"}};
        break;
      }
      for (EventId y = 0; y < order.size(); ++y) {
        if (g.image[y] && order.leq(x, y) != order.leq(*g.image[x], *g.image[y])) {
          bad = {{"x", order.name(x)}, {"y", order.name(y)}};
          break;
        }
      }
    }
    nlohmann::json w = {{"condition", "automorphism"}, {"generator", g.name}};
    if (!bad.is_null()) w["at"] = bad;
    report.require(bad.is_null(), w);
  }

  std::vector<Word> letters;
  for (std::size_t g = 0; g < action.generators.size(); ++g) {
    letters.push_back({{g, 1}});
    letters.push_back({{g, -1}});
  }
  const auto objs = sample_of(c.objects(), opts.samples, rng);
  const auto morphisms = sample_of(all_morphisms(c), opts.samples, rng);
  std::vector<std::pair<EventSet, EventSet>> products;
  {
    const auto all_objs = c.objects();
    for (const EventSet& a : all_objs) {
      for (const EventSet& b : all_objs) {
        if (a.any() && b.any() && c.product_defined(a, b)) products.emplace_back(a, b);
      }
    }
    products = sample_of(std::move(products), opts.samples, rng);
  }

  for (const Word& w : letters) {
    const std::string gname = to_string(action, w);
    for (const EventSet& s : objs) {
      auto gs = act(action, w, s);
      if (!gs) continue;
      report.require(c.contains(*gs), {{"condition", 1}, {"generator", gname}, {"slice", names(s)}});
    }
    for (const auto& [s, t] : morphisms) {
      auto gs = act(action, w, s);
      auto gt = act(action, w, t);
      if (!gs || !gt) continue;
      report.require(c.leads_to(*gs, *gt),
                     {{"condition", 2}, {"generator", gname}, {"sigma", names(s)}, {"gamma", names(t)}});
    }
    for (const auto& [a, b] : products) {
      auto ga = act(action, w, a);
      auto gb = act(action, w, b);
      if (!ga || !gb) continue;
      auto gab = act(action, w, a | b);
      bool ok = c.product_defined(*ga, *gb) && gab && *gab == (*ga | *gb);
      report.require(ok, {{"condition", 3}, {"generator", gname}, {"left", names(a)}, {"right", names(b)}});
    }
  }

  if (opts.foliation) {
    const auto& leaves = opts.foliation->leaves;
    std::vector<bool> reached(leaves.size(), false);
    std::vector<std::size_t> queue;
    if (!leaves.empty()) {
      reached[0] = true;
      queue.push_back(0);
    }
    for (std::size_t q = 0; q < queue.size(); ++q) {
      for (const Word& w : letters) {
        auto image = act(action, w, leaves[queue[q]]);
        if (!image) continue;
        auto it = std::find(leaves.begin(), leaves.end(), *image);
        if (it == leaves.end()) continue;
        auto j = static_cast<std::size_t>(it - leaves.begin());
        if (!reached[j]) {
          reached[j] = true;
          queue.push_back(j);
        }
      }
    }
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      report.require(reached[i], {{"condition", "transitivity"}, {"leaf", names(leaves[i])}});
    }
  }
  return report;
}

InvarianceData identity_invariance(const FieldTheory& psi) {
  const FieldTheory* p = &psi;
  return {[p](std::size_t, int, const EventSet& s) { return ProcMorphism::identity(p->object(s)); }};
}

ProcMorphism alpha_of_word(const FieldTheory& psi, const SymmetryAction& action,
                           const InvarianceData& data, const Word& w, const EventSet& sigma) {
  ProcMorphism acc = ProcMorphism::identity(psi.object(sigma));
  EventSet current = sigma;
  for (const Letter& l : w) {
    acc = compose(data.alpha(l.generator, l.power, current), acc);
    auto next = act(action, Word{l}, current);
    if (!next) throw Error(ErrorCode::InvalidMorphism, "group element leaves the window");
    current = std::move(*next);
  }
  return acc;
}

namespace {

// The group element named by a word: exponent vector or total action.
std::vector<long> element_key(const SymmetryAction& action, const Word& w) {
  if (action.free_abelian) {
    std::vector<long> e(action.generators.size(), 0);
    for (const Letter& l : w) e[l.generator] += l.power;
    return e;
  }
  const std::size_t n = action.order->size();
  std::vector<long> image(n);
  for (EventId x = 0; x < n; ++x) {
    EventId y = x;
    for (const Letter& l : w) {
      const auto& g = action.generators[l.generator];
      const auto& m = l.power > 0 ? g.image : g.inverse;
      if (!m[y]) throw Error(ErrorCode::BadParams, "finite group generators must act totally");
      y = *m[y];
    }
    image[x] = static_cast<long>(y);
  }
  return image;
}

bool is_identity_key(const SymmetryAction& action, const std::vector<long>& key) {
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] != (action.free_abelian ? 0 : static_cast<long>(i))) return false;
  }
  return true;
}

}  // namespace

Report check_invariance(const FieldTheory& psi, const SymmetryAction& action,
                        const InvarianceData& data, const InvarianceOptions& opts) {
  Report report("invariance");
  const SliceCategory& c = psi.category();
  const FiniteOrder& order = c.order();
  std::mt19937_64 rng(opts.seed);
  const std::vector<Word> words = words_up_to(action, opts.max_word);
  const auto morphisms = sample_of(all_morphisms(c), opts.samples, rng);

  struct Outcome {
    std::size_t word;
    double deviation;
    bool exact;
    bool preserved;
  };
  std::vector<std::vector<Outcome>> results(morphisms.size());
  parallel_for(morphisms.size(), [&](std::size_t i) {
    const auto& [s, t] = morphisms[i];
    const ProcMorphism base = psi.morphism(s, t);
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      auto gs = act(action, words[wi], s);
      auto gt = act(action, words[wi], t);
      if (!gs || !gt) continue;
      if (!c.leads_to(*gs, *gt)) {
        results[i].push_back({wi, 1.0, false, false});
        continue;
      }
      ProcMorphism lhs = compose(alpha_of_word(psi, action, data, words[wi], t), base);
      ProcMorphism rhs = compose(psi.morphism(*gs, *gt), alpha_of_word(psi, action, data, words[wi], s));
      if (lhs == rhs) {
        results[i].push_back({wi, 0.0, true, true});
      } else {
        results[i].push_back({wi, morphism_deviation(lhs, rhs), false, true});
      }
    }
  });
  for (std::size_t i = 0; i < morphisms.size(); ++i) {
    for (const Outcome& o : results[i]) {
      nlohmann::json w = {{"law", "naturality"},
                          {"word", to_string(action, words[o.word])},
                          {"sigma", order.names_of(morphisms[i].first)},
                          {"gamma", order.names_of(morphisms[i].second)}};
      if (!o.preserved) {
        w["law"] = "morphism not preserved";
        report.require(false, w);
      } else if (opts.exact && !o.exact) {
        w["structural"] = false;
        report.require(false, w);
        report.violations.back().deviation = o.deviation;
      } else {
        report.check(o.deviation, opts.tol, w);
      }
    }
  }

  // Cocycle consistency: words naming the same element give the same α, and
  // the identity element gets the identity family.
  std::map<std::vector<long>, std::vector<std::size_t>> classes;
  for (std::size_t wi = 0; wi < words.size(); ++wi) classes[element_key(action, words[wi])].push_back(wi);
  const auto objs = sample_of(c.objects(), opts.samples == 0 ? 64 : opts.samples, rng);
  for (const auto& [key, members_of] : classes) {
    const bool identity = is_identity_key(action, key);
    if (members_of.size() < 2 && !identity) continue;
    for (const EventSet& s : objs) {
      std::optional<ProcMorphism> reference;
      std::size_t ref_word = 0;
      if (identity) reference = ProcMorphism::identity(psi.object(s));
      for (std::size_t wi : members_of) {
        if (!act(action, words[wi], s)) continue;
        ProcMorphism a = alpha_of_word(psi, action, data, words[wi], s);
        if (!reference) {
          reference = std::move(a);
          ref_word = wi;
          continue;
        }
        double dev = a == *reference ? 0.0 : morphism_deviation(a, *reference);
        report.check(dev, opts.tol,
                     {{"law", "cocycle"},
                      {"word", to_string(action, words[wi])},
                      {"against", identity ? std::string("e") : to_string(action, words[ref_word])},
                      {"sigma", order.names_of(s)}});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

CMatrix dirac_scattering(double m, double eps) {
  const double c = std::cos(m * eps);
  const double s = std::sin(m * eps);
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(3, 3) = 1.0;
  u(1, 1) = Complex(0.0, -s);
  u(1, 2) = c;
  u(2, 1) = c;
  u(2, 2) = Complex(0.0, -s);
  return u;
}

CMatrix factor_swap(std::size_t cell_dim) {
  const auto d = static_cast<Eigen::Index>(cell_dim);
  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  }
  return s;
}

PartitionedCCAConfig dirac_config(double m, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::BadParams, "epsilon must be positive");
  PartitionedCCAConfig c;
  c.d = 1;
  c.cell_dim = 2;
  c.backend = Backend::Quantum;
  CMatrix u = factor_swap(2) * dirac_scattering(m, eps);
  c.U_inv = CMatrix(u.adjoint());
  c.U = std::move(u);
  return c;
}

// ---------------------------------------------------------------------------

SingleParticleWalk::SingleParticleWalk(const PartitionedCCAConfig& config, int period, int t0)
    : period_(period), t_(t0) {
  if (config.d != 1 || config.cell_dim != 2 || config.backend != Backend::Quantum ||
      !std::holds_alternative<CMatrix>(config.U) || !config.overrides.empty()) {
    throw Error(ErrorCode::BadConfig, "one-particle walks need a homogeneous unitary d=1 qubit automaton");
  }
  if (period < 4 || period % 2 != 0) throw Error(ErrorCode::BadParams, "ring period must be even and at least 4");
  validate_config(config);
  const CMatrix& u = std::get<CMatrix>(config.U);
  // Basis |ab⟩ with a the factor from x−1 (right mover) and b from x+1.
  constexpr Eigen::Index kVac = 0, kLeft = 1, kRight = 2;
  double leak = std::abs(u(kVac, kVac) - 1.0);
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (i != kVac) leak = std::max({leak, std::abs(u(i, kVac)), std::abs(u(kVac, i))});
    if (i != kLeft && i != kRight) {
      leak = std::max({leak, std::abs(u(i, kLeft)), std::abs(u(i, kRight))});
    }
  }
  if (leak > kValidityTol) throw Error(ErrorCode::BadConfig, "U does not preserve the one-particle sector");
  coin_ << u(kRight, kRight), u(kRight, kLeft), u(kLeft, kRight), u(kLeft, kLeft);
  right_.assign(static_cast<std::size_t>(period), Complex(0.0));
  left_.assign(static_cast<std::size_t>(period), Complex(0.0));
}

std::vector<int> SingleParticleWalk::sites() const {
  std::vector<int> out;
  for (int x = ((t_ % 2) + 2) % 2; x < period_; x += 2) out.push_back(x);
  return out;
}

void SingleParticleWalk::set(std::vector<Complex> right, std::vector<Complex> left) {
  const auto p = static_cast<std::size_t>(period_);
  if (right.size() != p || left.size() != p) throw Error(ErrorCode::ShapeMismatch, "one amplitude per site");
  const int parity = ((t_ % 2) + 2) % 2;
  for (std::size_t x = 0; x < p; ++x) {
    if (static_cast<int>(x % 2) != parity && (right[x] != 0.0 || left[x] != 0.0)) {
      throw Error(ErrorCode::ShapeMismatch, "amplitude at a site of the wrong parity");
    }
  }
  right_ = std::move(right);
  left_ = std::move(left);
}

void SingleParticleWalk::step() {
  const auto p = static_cast<std::size_t>(period_);
  std::vector<Complex> r(p, Complex(0.0));
  std::vector<Complex> l(p, Complex(0.0));
  for (int y : sites()) {
    const auto i = static_cast<std::size_t>(y);
    const Complex out_r = coin_(0, 0) * right_[i] + coin_(0, 1) * left_[i];
    const Complex out_l = coin_(1, 0) * right_[i] + coin_(1, 1) * left_[i];
    r[(i + 1) % p] = out_r;
    l[(i + p - 1) % p] = out_l;
  }
  right_ = std::move(r);
  left_ = std::move(l);
  ++t_;
}

double SingleParticleWalk::norm() const {
  double n = 0.0;
  for (std::size_t i = 0; i < right_.size(); ++i) n += std::norm(right_[i]) + std::norm(left_[i]);
  return n;
}

std::vector<double> SingleParticleWalk::marginals() const {
  std::vector<double> out(right_.size());
  for (std::size_t i = 0; i < right_.size(); ++i) out[i] = std::norm(right_[i]) + std::norm(left_[i]);
  return out;
}

}  // namespace cft
