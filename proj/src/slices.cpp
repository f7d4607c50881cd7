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

#include "cft/slices.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "cft/error.hpp"

namespace cft {

namespace {

nlohmann::json names_json(const FiniteOrder& order, const EventSet& s) {
  return order.names_of(s);
}

bool canonical_less(const EventSet& a, const EventSet& b) {
  if (a.count() != b.count()) return a.count() < b.count();
  return members(a) < members(b);
}

}  // namespace

bool is_slice(const FiniteOrder& order, const EventSet& a) { return is_antichain(order, a); }

bool space_like_separated(const FiniteOrder& order, const EventSet& a, const EventSet& b) {
  return !(a & (future(order, b) | past(order, b))).any();
}

bool slice_leads_to(const FiniteOrder& order, const EventSet& sigma, const EventSet& gamma) {
  return gamma.is_subset_of(future_domain(order, sigma));
}

// ---------------------------------------------------------------------------

SliceCategory::SliceCategory(std::shared_ptr<const FiniteOrder> order, Spec spec)
    : order_(std::move(order)), spec_(std::move(spec)) {
  if (!order_) throw Error(ErrorCode::BadParams, "slice category without an order");
}

SliceCategory SliceCategory::all_slices(std::shared_ptr<const FiniteOrder> order) {
  return SliceCategory(std::move(order), Spec{"Slice", {}, {}, {}, {}});
}

bool SliceCategory::contains(const EventSet& s) const {
  if (s.size() != order_->size() || !is_slice(*order_, s)) return false;
  return !spec_.member || spec_.member(s);
}

bool SliceCategory::product_predicate(const EventSet& a, const EventSet& b) const {
  if (spec_.product) return spec_.product(a, b);
  return space_like_separated(*order_, a, b);
}

bool SliceCategory::product_defined(const EventSet& a, const EventSet& b) const {
  return contains(a) && contains(b) && space_like_separated(*order_, a, b) &&
         product_predicate(a, b) && contains(a | b);
}

EventSet SliceCategory::tensor(const EventSet& a, const EventSet& b) const {
  if (!contains(a) || !contains(b)) {
    throw Error(ErrorCode::NotInCategory, "tensor operand is not an object of " + name());
  }
  if (!space_like_separated(*order_, a, b)) {
    throw Error(ErrorCode::NotSeparated, "tensor operands are not space-like separated");
  }
  if (!product_predicate(a, b) || !contains(a | b)) {
    throw Error(ErrorCode::NotInCategory, "tensor product is not defined in " + name());
  }
  return a | b;
}

bool SliceCategory::leads_to(const EventSet& sigma, const EventSet& gamma) const {
  if (!contains(sigma) || !contains(gamma)) return false;
  if (spec_.leads_to) return spec_.leads_to(sigma, gamma);
  return slice_leads_to(*order_, sigma, gamma);
}

std::vector<EventSet> SliceCategory::objects() const {
  std::vector<EventSet> out;
  if (spec_.objects) {
    for (EventSet& s : spec_.objects()) {
      if (contains(s)) out.push_back(std::move(s));
    }
  } else {
    for_each_antichain(*order_, order_->all(), [&](const EventSet& s) {
      if (!spec_.member || spec_.member(s)) out.push_back(s);
    });
  }
  std::sort(out.begin(), out.end(), canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SliceMorphism monoidal_morphism_product(const SliceCategory& c, const SliceMorphism& m1,
                                        const SliceMorphism& m2) {
  if (!c.leads_to(m1.source, m1.target) || !c.leads_to(m2.source, m2.target)) {
    throw Error(ErrorCode::InvalidMorphism, "factor is not a morphism of " + c.name());
  }
  SliceMorphism out{c.tensor(m1.source, m2.source), c.tensor(m1.target, m2.target)};
  if (!c.leads_to(out.source, out.target)) {
    throw Error(ErrorCode::InvalidMorphism, "product of morphisms is not a morphism");
  }
  return out;
}

std::vector<EventSet> enumerate_slices(const FiniteOrder& order) {
  std::vector<EventSet> out;
  for_each_antichain(order, order.all(), [&](const EventSet& s) { out.push_back(s); });
  return out;
}

std::vector<EventSet> maximal_slices(const FiniteOrder& order) {
  std::vector<EventSet> out;
  const EventSet everything = order.all();
  for_each_antichain(order, everything, [&](const EventSet& s) {
    if ((future(order, s) | past(order, s)) == everything) out.push_back(s);
  });
  return out;
}

bool is_cauchy(const FiniteOrder& order, const EventSet& sigma) {
  if (!is_slice(order, sigma)) return false;
  return (future_domain(order, sigma) | past_domain(order, sigma)).all();
}

bool is_cauchy(const LatticeWindow& window, const EventSet& sigma) {
  return is_cauchy(window.order(), sigma);
}

// ---------------------------------------------------------------------------

Report validate_foliation(const FiniteOrder& order, const Foliation& f) {
  Report report("foliation");
  EventSet covered = order.none();
  for (std::size_t i = 0; i < f.leaves.size(); ++i) {
    const EventSet& leaf = f.leaves[i];
    report.require(leaf.size() == order.size() && is_cauchy(order, leaf),
                   {{"condition", "cauchy"}, {"leaf", i}});
    if (leaf.size() != order.size()) continue;
    covered |= leaf;
    for (std::size_t j = i + 1; j < f.leaves.size(); ++j) {
      const EventSet& other = f.leaves[j];
      if (other.size() != order.size()) continue;
      bool ordered = slice_leads_to(order, leaf, other) || slice_leads_to(order, other, leaf);
      report.require(ordered, {{"condition", "total"}, {"leaves", {i, j}}});
      report.require(!(leaf & other).any(), {{"condition", "disjoint"}, {"leaves", {i, j}}});
    }
  }
  EventSet missing = order.all() - covered;
  report.require(missing.none(), {{"condition", "covering"}, {"missing", names_json(order, missing)}});
  return report;
}

SliceCategory foliation_category(std::shared_ptr<const FiniteOrder> order, const Foliation& f) {
  Report check = validate_foliation(*order, f);
  if (!check.passed()) {
    throw Error(ErrorCode::InvalidFoliation,
                std::to_string(check.violations.size()) + " foliation condition(s) fail");
  }
  auto leaves = std::make_shared<const std::vector<EventSet>>(f.leaves);
  SliceCategory::Spec spec;
  spec.name = "Foliation";
  spec.member = [leaves](const EventSet& s) {
    if (s.none()) return true;
    return std::any_of(leaves->begin(), leaves->end(),
                       [&](const EventSet& leaf) { return s.is_subset_of(leaf); });
  };
  spec.product = [leaves](const EventSet& a, const EventSet& b) {
    if ((a & b).any()) return false;
    EventSet both = a | b;
    if (both.none()) return true;
    return std::any_of(leaves->begin(), leaves->end(),
                       [&](const EventSet& leaf) { return both.is_subset_of(leaf); });
  };
  spec.objects = [leaves, n = order->size()] {
    std::set<std::vector<EventId>> seen;
    std::vector<EventSet> out{EventSet(n)};
    for (const EventSet& leaf : *leaves) {
      // Every subset of a leaf, by counting through a bit mask over it.
      auto ms = members(leaf);
      if (ms.size() >= 24) throw Error(ErrorCode::NonEnumerableRegion, "leaf too large to enumerate");
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << ms.size()); ++mask) {
        std::vector<EventId> pick;
        for (std::size_t k = 0; k < ms.size(); ++k) {
          if (mask >> k & 1u) pick.push_back(ms[k]);
        }
        if (seen.insert(pick).second) out.push_back(make_set(n, pick));
      }
    }
    return out;
  };
  return SliceCategory(std::move(order), std::move(spec));
}

// ---------------------------------------------------------------------------

Report validate_slice_category(const SliceCategory& c, const ValidationOptions& opts) {
  Report report("category");
  const FiniteOrder& order = c.order();
  const std::vector<EventSet> objs = c.objects();

  // (1) every relation x <= y is witnessed by a morphism of C.
  std::vector<EventSet> witnessed(order.size(), EventSet(order.size()));
  for (const EventSet& s : objs) {
    for (const EventSet& g : objs) {
      if (!c.leads_to(s, g)) continue;
      for (EventId x : members(s)) witnessed[x] |= g;
    }
  }
  for (EventId x = 0; x < order.size(); ++x) {
    EventSet missing = order.up(x) - witnessed[x];
    for (EventId y : members(missing)) {
      report.require(false, {{"condition", 1}, {"x", order.name(x)}, {"y", order.name(y)}});
    }
    report.samples += order.up(x).count() - missing.count();
  }

  // (2) restrictions Δ ∩ ◇_{Σ,Γ} stay in C.
  const std::size_t n = objs.size();
  auto restriction = [&](std::size_t i, std::size_t j, std::size_t k) {
    EventSet diamond = region_between(order, objs[i], objs[j]);
    EventSet cut = objs[k] & diamond;
    report.require(c.contains(cut), {{"condition", 2},
                                     {"sigma", names_json(order, objs[i])},
                                     {"gamma", names_json(order, objs[j])},
                                     {"delta", names_json(order, objs[k])}});
  };
  if (n * n * n <= opts.max_triples) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) restriction(i, j, k);
      }
    }
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < opts.max_triples; ++s) restriction(pick(rng), pick(rng), pick(rng));
  }

  // (3) partial monoidal structure.
  report.require(c.contains(order.none()), {{"condition", 3}, {"missing", "empty slice"}});
  for (const EventSet& a : objs) {
    for (const EventSet& b : objs) {
      if (!c.product_predicate(a, b)) continue;
      bool ok = space_like_separated(order, a, b) && c.contains(a | b);
      report.require(ok, {{"condition", 3},
                          {"left", names_json(order, a)},
                          {"right", names_json(order, b)}});
    }
  }
  return report;
}

bool is_region_of(const SliceCategory& c, const EventSet& r) {
  const FiniteOrder& order = c.order();
  if (r.size() != order.size()) return false;
  if (r.none()) return c.contains(r);
  if (!is_region(order, r)) return false;
  EventSet lo = minimal_elements(order, r);
  EventSet hi = maximal_elements(order, r);
  return c.contains(lo) && c.contains(hi) && region_between(order, lo, hi) == r;
}

SliceCategory restrict_to_region(const SliceCategory& c, const EventSet& r) {
  if (!is_region_of(c, r)) {
    throw Error(ErrorCode::NotARegionOfC, "set is not a region of " + c.name());
  }
  SliceCategory::Spec spec = c.spec();
  spec.name = c.name() + "|R";
  auto parent = std::make_shared<const SliceCategory>(c);
  spec.member = [parent, r](const EventSet& s) { return s.is_subset_of(r) && parent->contains(s); };
  if (c.spec().objects) {
    spec.objects = [parent, r] {
      std::vector<EventSet> out;
      for (EventSet& s : parent->objects()) {
        if (s.is_subset_of(r)) out.push_back(std::move(s));
      }
      return out;
    };
  }
  return SliceCategory(c.order_ptr(), std::move(spec));
}

SliceCategory reverse_category(const SliceCategory& c, SliceCategory::PairPredicate reversed_leads_to,
                               const ValidationOptions& opts) {
  auto rev = std::make_shared<const FiniteOrder>(c.order().reversed());
  SliceCategory::Spec spec = c.spec();
  spec.name = c.name() + "^rev";
  spec.leads_to = std::move(reversed_leads_to);
  SliceCategory out(rev, std::move(spec));
  Report check = validate_slice_category(out, opts);
  if (!check.passed()) {
    throw Error(ErrorCode::NotReversible, "reverse fails condition " +
                                              check.violations.front().witness["condition"].dump());
  }
  return out;
}

}  // namespace cft
