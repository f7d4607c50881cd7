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

#include "cft/field_theory.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "cft/error.hpp"
#include "cft/parallel.hpp"

namespace cft {

namespace {

nlohmann::json names(const SliceCategory& c, const EventSet& s) { return c.order().names_of(s); }

std::vector<EventId> key_of(const EventSet& s) { return members(s); }

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& from) {
  std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
  return from[d(rng)];
}

// Prefers non-empty slices when there are any.
EventSet pick_slice(std::mt19937_64& rng, const std::vector<EventSet>& from) {
  std::vector<EventSet> nonempty;
  for (const EventSet& s : from) {
    if (s.any()) nonempty.push_back(s);
  }
  return nonempty.empty() ? pick(rng, from) : pick(rng, nonempty);
}

}  // namespace

FieldTheory::FieldTheory(std::shared_ptr<const SliceCategory> category, Backend backend,
                         ObjectMap objects, MorphismMap morphisms, Coherence coherence,
                         Options options)
    : category_(std::move(category)),
      backend_(backend),
      objects_(std::move(objects)),
      morphisms_(std::move(morphisms)),
      coherence_(std::move(coherence)),
      options_(options) {
  if (!category_ || !objects_ || !morphisms_) {
    throw Error(ErrorCode::BadParams, "field theory needs a category and both assignments");
  }
}

ProcObject FieldTheory::object(const EventSet& s) const {
  if (!category_->contains(s)) {
    throw Error(ErrorCode::NotInCategory, "slice is not an object of " + category_->name());
  }
  ProcObject obj = objects_(s);
  if (obj.backend() != backend_) throw Error(ErrorCode::BackendMismatch, "object on another backend");
  return obj;
}

ProcMorphism FieldTheory::morphism(const EventSet& from, const EventSet& to) const {
  if (!category_->leads_to(from, to)) {
    throw Error(ErrorCode::InvalidMorphism, "no morphism between these slices in " + category_->name());
  }
  auto key = std::make_pair(key_of(from), key_of(to));
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  ProcMorphism m = morphisms_(from, to);
  if (!(m.dom() == object(from)) || !(m.cod() == object(to))) {
    throw Error(ErrorCode::ShapeMismatch, "morphism image does not run between the object images");
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return cache_.emplace(std::move(key), std::move(m)).first->second;
}

ProcMorphism FieldTheory::discard(const EventSet& s) const {
  return morphism(s, category_->order().none());
}

ProcMorphism FieldTheory::coherence(const EventSet& a, const EventSet& b) const {
  if (!category_->product_defined(a, b)) {
    throw Error(ErrorCode::NotInCategory, "product is not defined in " + category_->name());
  }
  if (coherence_) return coherence_(a, b);
  return ProcMorphism::identity(tensor_obj(object(a), object(b)));
}

// ---------------------------------------------------------------------------

std::vector<std::pair<EventSet, EventSet>> all_morphisms(const SliceCategory& c) {
  std::vector<std::pair<EventSet, EventSet>> out;
  const auto objs = c.objects();
  for (const EventSet& a : objs) {
    for (const EventSet& b : objs) {
      if (c.leads_to(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<Triple> composable_triples(const SliceCategory& c) {
  const auto objs = c.objects();
  std::vector<std::vector<std::size_t>> next(objs.size());
  for (std::size_t i = 0; i < objs.size(); ++i) {
    for (std::size_t j = 0; j < objs.size(); ++j) {
      if (c.leads_to(objs[i], objs[j])) next[i].push_back(j);
    }
  }
  std::vector<Triple> out;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    for (std::size_t j : next[i]) {
      for (std::size_t k : next[j]) out.push_back({objs[i], objs[j], objs[k]});
    }
  }
  return out;
}

std::vector<Quadruple> separated_quadruples(const SliceCategory& c, std::size_t count,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto objs = c.objects();
  std::vector<std::pair<EventSet, EventSet>> pairs;
  for (const EventSet& a : objs) {
    for (const EventSet& b : objs) {
      if (a.any() && b.any() && c.product_defined(a, b)) pairs.emplace_back(a, b);
    }
  }
  if (pairs.empty()) {
    for (const EventSet& a : objs) {
      for (const EventSet& b : objs) {
        if (c.product_defined(a, b)) pairs.emplace_back(a, b);
      }
    }
  }
  std::vector<Quadruple> out;
  if (pairs.empty()) return out;
  auto targets_of = [&](const EventSet& s) {
    std::vector<EventSet> t;
    for (const EventSet& o : objs) {
      if (c.leads_to(s, o)) t.push_back(o);
    }
    return t;
  };
  for (std::size_t n = 0; n < count; ++n) {
    const auto& [a, b] = pick(rng, pairs);
    const EventSet a2 = pick_slice(rng, targets_of(a));
    std::vector<EventSet> b_targets;
    for (EventSet& t : targets_of(b)) {
      if (c.product_defined(a2, t)) b_targets.push_back(std::move(t));
    }
    const EventSet b2 = pick_slice(rng, b_targets);
    out.push_back({a, b, a2, b2});
  }
  return out;
}

// ---------------------------------------------------------------------------

Report check_functoriality(const FieldTheory& psi, const std::vector<Triple>& samples, double tol) {
  Report report("functoriality");
  const SliceCategory& c = psi.category();
  std::set<std::vector<EventId>> seen;
  std::vector<EventSet> distinct;
  for (const Triple& t : samples) {
    for (const EventSet* s : {&t.first, &t.second, &t.third}) {
      if (seen.insert(key_of(*s)).second) distinct.push_back(*s);
    }
  }

  std::vector<double> id_dev(distinct.size());
  parallel_for(distinct.size(), [&](std::size_t i) {
    const EventSet& s = distinct[i];
    id_dev[i] = morphism_deviation(psi.morphism(s, s), ProcMorphism::identity(psi.object(s)));
  });
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    report.check(id_dev[i], tol, {{"law", "identity"}, {"slice", names(c, distinct[i])}});
  }

  std::vector<double> dev(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const Triple& t = samples[i];
    ProcMorphism two = compose(psi.morphism(t.second, t.third), psi.morphism(t.first, t.second));
    dev[i] = morphism_deviation(two, psi.morphism(t.first, t.third));
  });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Triple& t = samples[i];
    report.check(dev[i], tol, {{"law", "composition"},
                               {"slices", {names(c, t.first), names(c, t.second), names(c, t.third)}}});
  }

  if (psi.options().injective_objects) {
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      for (std::size_t j = i + 1; j < distinct.size(); ++j) {
        report.require(!(psi.object(distinct[i]) == psi.object(distinct[j])),
                       {{"law", "injective on objects"},
                        {"slices", {names(c, distinct[i]), names(c, distinct[j])}}});
      }
    }
  }
  return report;
}

Report check_monoidality(const FieldTheory& psi, const std::vector<Quadruple>& samples, double tol) {
  Report report("monoidality");
  const SliceCategory& c = psi.category();
  std::vector<double> dev(samples.size());
  std::vector<bool> objects_ok(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const Quadruple& q = samples[i];
    EventSet source = c.tensor(q.sigma, q.gamma);
    EventSet target = c.tensor(q.sigma2, q.gamma2);
    ProcMorphism in = psi.coherence(q.sigma, q.gamma);
    ProcMorphism out = psi.coherence(q.sigma2, q.gamma2);
    objects_ok[i] = in.dom() == tensor_obj(psi.object(q.sigma), psi.object(q.gamma)) &&
                    in.cod() == psi.object(source) &&
                    out.dom() == tensor_obj(psi.object(q.sigma2), psi.object(q.gamma2)) &&
                    out.cod() == psi.object(target);
    if (!objects_ok[i]) {
      dev[i] = 1.0;
      return;
    }
    ProcMorphism lhs = compose(psi.morphism(source, target), in);
    ProcMorphism rhs =
        compose(out, tensor_mor(psi.morphism(q.sigma, q.sigma2), psi.morphism(q.gamma, q.gamma2)));
    dev[i] = morphism_deviation(lhs, rhs);
  });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Quadruple& q = samples[i];
    nlohmann::json w = {{"sigma", names(c, q.sigma)},
                        {"gamma", names(c, q.gamma)},
                        {"sigma'", names(c, q.sigma2)},
                        {"gamma'", names(c, q.gamma2)}};
    if (!objects_ok[i]) {
      w["law"] = "objects";
      report.require(false, w);
    } else {
      report.check(dev[i], tol, w);
    }
  }
  return report;
}

std::vector<ProcMorphism> discard_family(const FieldTheory& psi, const std::vector<EventSet>& slices) {
  std::vector<ProcMorphism> out;
  out.reserve(slices.size());
  for (const EventSet& s : slices) out.push_back(psi.discard(s));
  return out;
}

Report check_environment(const FieldTheory& psi,
                         const std::vector<std::pair<EventSet, EventSet>>& morphisms,
                         const std::vector<std::pair<EventSet, EventSet>>& products, double tol) {
  Report report("environment");
  const SliceCategory& c = psi.category();
  std::vector<double> dev(morphisms.size());
  parallel_for(morphisms.size(), [&](std::size_t i) {
    const auto& [s, g] = morphisms[i];
    dev[i] = morphism_deviation(compose(psi.discard(g), psi.morphism(s, g)), psi.discard(s));
  });
  for (std::size_t i = 0; i < morphisms.size(); ++i) {
    report.check(dev[i], tol, {{"law", "discard after evolution"},
                               {"sigma", names(c, morphisms[i].first)},
                               {"gamma", names(c, morphisms[i].second)}});
  }
  std::vector<double> pdev(products.size());
  parallel_for(products.size(), [&](std::size_t i) {
    const auto& [a, b] = products[i];
    ProcMorphism lhs = compose(psi.discard(c.tensor(a, b)), psi.coherence(a, b));
    pdev[i] = morphism_deviation(lhs, tensor_mor(psi.discard(a), psi.discard(b)));
  });
  for (std::size_t i = 0; i < products.size(); ++i) {
    report.check(pdev[i], tol, {{"law", "discard of a product"},
                                {"sigma", names(c, products[i].first)},
                                {"gamma", names(c, products[i].second)}});
  }
  return report;
}

// ---------------------------------------------------------------------------

const ProcState& StateFamily::at(const EventSet& s) const {
  auto it = states.find(key_of(s));
  if (it == states.end()) throw Error(ErrorCode::NotInCategory, "family has no state on this slice");
  return it->second;
}

std::vector<EventSet> region_slices(const SliceCategory& c, const EventSet& region) {
  if (!is_region_of(c, region)) {
    throw Error(ErrorCode::NotARegionOfC, "set is not a region of " + c.name());
  }
  constexpr std::size_t kLimit = std::size_t{1} << 16;
  std::vector<EventSet> out;
  std::size_t visited = 0;
  for_each_antichain(c.order(), region, [&](const EventSet& s) {
    if (++visited > kLimit) {
      throw Error(ErrorCode::NonEnumerableRegion, "region has too many slices to enumerate");
    }
    if (c.contains(s)) out.push_back(s);
  });
  return out;
}

StateFamily push_forward_family(const FieldTheory& psi, const EventSet& region,
                                const EventSet& sigma, const ProcState& rho) {
  StateFamily family{region, {}};
  for (const EventSet& d : region_slices(psi.category(), region)) {
    if (!psi.category().leads_to(sigma, d)) {
      throw Error(ErrorCode::InvalidMorphism, "a slice of the region is not reachable from the source");
    }
    family.states.emplace(key_of(d), apply(psi.morphism(sigma, d), rho));
  }
  return family;
}

Report stability_report(const FieldTheory& psi, const StateFamily& family, double tol) {
  Report report("stability");
  const SliceCategory& c = psi.category();
  const auto slices = region_slices(c, family.region);
  for (const EventSet& a : slices) {
    for (const EventSet& b : slices) {
      if (!c.leads_to(a, b)) continue;
      nlohmann::json w = {{"from", names(c, a)}, {"to", names(c, b)}};
      auto ia = family.states.find(key_of(a));
      auto ib = family.states.find(key_of(b));
      if (ia == family.states.end() || ib == family.states.end()) {
        report.require(false, w);
        continue;
      }
      report.check(state_distance(apply(psi.morphism(a, b), ia->second), ib->second), tol, w);
    }
  }
  return report;
}

bool is_stable_family(const FieldTheory& psi, const StateFamily& family, double tol) {
  return stability_report(psi, family, tol).passed();
}

StateFamily restrict_states(const FieldTheory& psi, const EventSet& sub_region, const StateFamily& rho) {
  if (!sub_region.is_subset_of(rho.region)) {
    throw Error(ErrorCode::NotSubset, "restriction target is not inside the region");
  }
  StateFamily out{sub_region, {}};
  for (const EventSet& d : region_slices(psi.category(), sub_region)) {
    out.states.emplace(key_of(d), rho.at(d));
  }
  return out;
}

// ---------------------------------------------------------------------------

ProcMorphism zigzag_image(const FieldTheory& psi, const FieldTheory& phi, const ZigZag& chain) {
  if (chain.slices.size() < 2 || chain.slices.size() % 2 != 0) {
    throw Error(ErrorCode::InvalidMorphism, "a zig-zag has an even number of slices, at least two");
  }
  ProcMorphism acc = psi.morphism(chain.slices[0], chain.slices[1]);
  for (std::size_t i = 1; i + 1 < chain.slices.size(); ++i) {
    const FieldTheory& theory = i % 2 == 1 ? phi : psi;
    acc = compose(theory.morphism(chain.slices[i], chain.slices[i + 1]), acc);
  }
  return acc;
}

std::vector<std::pair<ZigZag, ZigZag>> sample_zigzag_pairs(const FieldTheory& psi,
                                                           const FieldTheory& phi,
                                                           std::size_t max_zigzag,
                                                           std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto objs = psi.category().objects();
  std::vector<std::pair<ZigZag, ZigZag>> out;
  if (objs.empty()) return out;
  auto reachable = [&](const SliceCategory& c, const EventSet& from) {
    std::vector<EventSet> r;
    for (const EventSet& o : objs) {
      if (c.leads_to(from, o)) r.push_back(o);
    }
    return r;
  };
  std::uniform_int_distribution<std::size_t> zig(0, max_zigzag);
  // Prefers links that are not mere restrictions and that keep such a
  // continuation in the other category, so that reversed links act on
  // something.
  auto moves = [](const EventSet& from, const EventSet& to) { return to.any() && !to.is_subset_of(from); };
  auto step = [&](const SliceCategory& here, const SliceCategory& next, const EventSet& from) {
    std::vector<EventSet> all = reachable(here, from);
    std::vector<EventSet> moving;
    std::vector<EventSet> good;
    for (const EventSet& s : all) {
      if (!moves(from, s)) continue;
      moving.push_back(s);
      for (const EventSet& o : objs) {
        if (moves(s, o) && next.leads_to(s, o)) {
          good.push_back(s);
          break;
        }
      }
    }
    if (!good.empty()) return pick(rng, good);
    if (!moving.empty()) return pick(rng, moving);
    return pick_slice(rng, all);
  };
  auto walk = [&](const EventSet& start, std::size_t n) {
    ZigZag z{{start}};
    for (std::size_t k = 0; k < n; ++k) {
      z.slices.push_back(step(psi.category(), phi.category(), z.slices.back()));
      z.slices.push_back(step(phi.category(), psi.category(), z.slices.back()));
    }
    return z;
  };
  for (std::size_t s = 0; s < count; ++s) {
    const EventSet start = pick_slice(rng, objs);
    ZigZag a = walk(start, zig(rng));
    ZigZag b = walk(start, zig(rng));
    std::vector<EventSet> ends;
    for (const EventSet& o : objs) {
      if (psi.category().leads_to(a.slices.back(), o) && psi.category().leads_to(b.slices.back(), o)) {
        ends.push_back(o);
      }
    }
    const EventSet end = pick_slice(rng, ends);
    a.slices.push_back(end);
    b.slices.push_back(end);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

Report check_reversal(const FieldTheory& psi, const FieldTheory& phi,
                      const std::vector<std::pair<ZigZag, ZigZag>>& samples, double tol) {
  Report report("reversal");
  const SliceCategory& c = psi.category();
  std::set<std::vector<EventId>> seen;
  for (const auto& [a, b] : samples) {
    for (const ZigZag* z : {&a, &b}) {
      for (const EventSet& s : z->slices) {
        if (!seen.insert(key_of(s)).second) continue;
        report.require(psi.object(s) == phi.object(s), {{"law", "objects"}, {"slice", names(c, s)}});
      }
    }
  }
  std::vector<double> dev(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    dev[i] = morphism_deviation(zigzag_image(psi, phi, samples[i].first),
                                zigzag_image(psi, phi, samples[i].second));
  });
  auto chain_json = [&](const ZigZag& z) {
    nlohmann::json j = nlohmann::json::array();
    for (const EventSet& s : z.slices) j.push_back(names(c, s));
    return j;
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    report.check(dev[i], tol, {{"law", "zig-zag"},
                               {"first", chain_json(samples[i].first)},
                               {"second", chain_json(samples[i].second)}});
  }
  return report;
}

// ---------------------------------------------------------------------------

ProcState GlobalState::state_on(const FieldTheory& psi, const EventSet& delta) const {
  for (std::size_t k = 0; k < foliation.leaves.size(); ++k) {
    if (delta.is_subset_of(foliation.leaves[k])) {
      return apply(psi.morphism(foliation.leaves[k], delta), leaves[k]);
    }
  }
  throw Error(ErrorCode::NotInCategory, "slice lies in no leaf of the foliation");
}

StateFamily GlobalState::family_on(const FieldTheory& psi, const EventSet& region) const {
  StateFamily family{region, {}};
  for (const EventSet& d : region_slices(psi.category(), region)) {
    family.states.emplace(key_of(d), state_on(psi, d));
  }
  return family;
}

GlobalState global_state_from_cauchy(const FieldTheory& psi, const FieldTheory& phi,
                                     const Foliation& foliation, const EventSet& sigma,
                                     const ProcState& rho) {
  auto at = std::find(foliation.leaves.begin(), foliation.leaves.end(), sigma);
  if (at == foliation.leaves.end() || !is_cauchy(psi.category().order(), sigma)) {
    throw Error(ErrorCode::NotCauchy, "initial data must sit on a Cauchy leaf of the foliation");
  }
  if (!(phi.category().order() == psi.category().order().reversed())) {
    throw Error(ErrorCode::NotAReversal, "reversal is not defined on the reversed order");
  }
  for (const EventSet& leaf : foliation.leaves) {
    if (!(psi.object(leaf) == phi.object(leaf))) {
      throw Error(ErrorCode::NotAReversal, "reversal disagrees with the theory on a leaf");
    }
  }
  GlobalState out{foliation, {}};
  for (const EventSet& leaf : foliation.leaves) {
    if (psi.category().leads_to(sigma, leaf)) {
      out.leaves.push_back(apply(psi.morphism(sigma, leaf), rho));
    } else if (phi.category().leads_to(sigma, leaf)) {
      out.leaves.push_back(apply(phi.morphism(sigma, leaf), rho));
    } else {
      throw Error(ErrorCode::InvalidFoliation, "leaves are not totally ordered");
    }
  }
  return out;
}

}  // namespace cft
