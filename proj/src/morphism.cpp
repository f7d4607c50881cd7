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

#include "cft/morphism.hpp"

#include <algorithm>
#include <functional>

#include "cft/error.hpp"

namespace cft {

OrderMorphism make_morphism(std::shared_ptr<const FiniteOrder> dom,
                            std::shared_ptr<const FiniteOrder> cod, std::vector<EventId> map) {
  if (!dom || !cod) throw Error(ErrorCode::InvalidMorphism, "missing domain or codomain");
  if (map.size() != dom->size()) {
    throw Error(ErrorCode::InvalidMorphism, "map is not total on the domain");
  }
  for (EventId y : map) {
    if (y >= cod->size()) throw Error(ErrorCode::InvalidMorphism, "map leaves the codomain");
  }
  return {std::move(dom), std::move(cod), std::move(map)};
}

bool check_morphism(const OrderMorphism& f) {
  const FiniteOrder& a = *f.dom;
  const FiniteOrder& b = *f.cod;
  for (EventId x = 0; x < a.size(); ++x) {
    for (EventId y = 0; y < a.size(); ++y) {
      if (a.leq(x, y) && !b.leq(f.map[x], f.map[y])) return false;
      if (b.less(f.map[x], f.map[y]) && !a.less(x, y)) return false;
    }
  }
  return true;
}

bool is_injective(const OrderMorphism& f) {
  EventSet seen(f.cod->size());
  for (EventId y : f.map) {
    if (seen.test(y)) return false;
    seen.set(y);
  }
  return true;
}

bool is_surjective(const OrderMorphism& f) {
  EventSet seen(f.cod->size());
  for (EventId y : f.map) seen.set(y);
  return seen.all();
}

OrderMorphism identity_morphism(std::shared_ptr<const FiniteOrder> order) {
  std::vector<EventId> map(order->size());
  for (EventId x = 0; x < map.size(); ++x) map[x] = x;
  return {order, order, std::move(map)};
}

OrderMorphism compose(const OrderMorphism& g, const OrderMorphism& f) {
  if (f.cod != g.dom && !(*f.cod == *g.dom)) {
    throw Error(ErrorCode::InvalidMorphism, "codomain and domain differ in composition");
  }
  std::vector<EventId> map(f.map.size());
  for (EventId x = 0; x < map.size(); ++x) map[x] = g.map[f.map[x]];
  return {f.dom, g.cod, std::move(map)};
}

OrderMorphism inclusion(std::shared_ptr<const FiniteOrder> order, const EventSet& s) {
  auto [sub, embed] = order->induced(s);
  return {std::make_shared<const FiniteOrder>(std::move(sub)), std::move(order), std::move(embed)};
}

EpiMono epi_mono_factor(const OrderMorphism& f) {
  if (!check_morphism(f)) throw Error(ErrorCode::InvalidMorphism, "not a CausOrd morphism");
  EventSet image(f.cod->size());
  for (EventId y : f.map) image.set(y);
  OrderMorphism embedding = inclusion(f.cod, image);
  std::vector<EventId> local(f.cod->size(), 0);
  for (EventId i = 0; i < embedding.map.size(); ++i) local[embedding.map[i]] = i;
  std::vector<EventId> q(f.map.size());
  for (EventId x = 0; x < q.size(); ++x) q[x] = local[f.map[x]];
  return {OrderMorphism{f.dom, embedding.dom, std::move(q)}, std::move(embedding)};
}

namespace {

EventSet image_of(const OrderMorphism& f) {
  EventSet s(f.cod->size());
  for (EventId y : f.map) s.set(y);
  return s;
}

// An injective morphism whose domain carries exactly the induced order.
bool is_suborder(const OrderMorphism& f) {
  if (!is_injective(f)) return false;
  for (EventId x = 0; x < f.dom->size(); ++x) {
    for (EventId y = 0; y < f.dom->size(); ++y) {
      if (f.dom->leq(x, y) != f.cod->leq(f.map[x], f.map[y])) return false;
    }
  }
  return true;
}

}  // namespace

bool is_region_morphism(const OrderMorphism& r) {
  return is_suborder(r) && is_region(*r.cod, image_of(r));
}

bool is_refinement(const OrderMorphism& f) {
  if (!is_suborder(f)) return false;
  const FiniteOrder& c = *f.cod;
  const EventSet image = image_of(f);
  for (EventId x = 0; x < c.size(); ++x) {
    for (EventId y = 0; y < c.size(); ++y) {
      if (!c.leq(x, y)) continue;
      if (!(c.down(x) & image).any() || !(c.up(y) & image).any()) return false;
    }
  }
  return true;
}

RegionRefinement region_refinement_factor(const OrderMorphism& i) {
  if (!is_injective(i) || !check_morphism(i)) {
    throw Error(ErrorCode::InvalidMorphism, "region/refinement factorisation needs a sub-order");
  }
  const EventSet image = image_of(i);
  EventSet theta = region_between(*i.cod, image, image);
  OrderMorphism region = inclusion(i.cod, theta);
  std::vector<EventId> local(i.cod->size(), 0);
  for (EventId k = 0; k < region.map.size(); ++k) local[region.map[k]] = k;
  std::vector<EventId> f(i.map.size());
  for (EventId x = 0; x < f.size(); ++x) f[x] = local[i.map[x]];
  return {OrderMorphism{i.dom, region.dom, std::move(f)}, std::move(region)};
}

std::optional<OrderMorphism> factorisation_isomorphism(const RegionRefinement& first,
                                                       const RegionRefinement& second) {
  const OrderMorphism& r = first.region;
  const OrderMorphism& r2 = second.region;
  if (!(*r.cod == *r2.cod) || !is_injective(r) || !is_injective(r2)) return std::nullopt;
  if (r.dom->size() != r2.dom->size()) return std::nullopt;
  // θ is forced: it is r2 with its codomain restricted to the image of r.
  std::vector<EventId> back(r.cod->size(), static_cast<EventId>(-1));
  for (EventId k = 0; k < r.map.size(); ++k) back[r.map[k]] = k;
  std::vector<EventId> theta(r2.map.size());
  for (EventId k = 0; k < theta.size(); ++k) {
    EventId through = back[r2.map[k]];
    if (through == static_cast<EventId>(-1)) return std::nullopt;
    theta[k] = through;
  }
  OrderMorphism iso{r2.dom, r.dom, std::move(theta)};
  if (!is_injective(iso) || !check_morphism(iso)) return std::nullopt;
  // An order bijection reflecting < is an isomorphism; check both equations.
  OrderMorphism via = compose(iso, second.refinement);
  if (via.map != first.refinement.map) return std::nullopt;
  if (compose(r, iso).map != r2.map) return std::nullopt;
  return iso;
}

Pullback pullback_slice(const OrderMorphism& f, const EventSet& sigma, SectionPolicy policy) {
  if (!is_antichain(*f.cod, sigma)) {
    throw Error(ErrorCode::NotInCategory, "pullback needs a slice of the codomain");
  }
  EventSet pre(f.dom->size());
  for (EventId x = 0; x < f.map.size(); ++x) {
    if (sigma.test(f.map[x])) pre.set(x);
  }
  auto [sub, embed] = f.dom->induced(pre);
  Pullback out;
  out.suborder = std::make_shared<const FiniteOrder>(std::move(sub));
  out.embedding = std::move(embed);
  const FiniteOrder& s = *out.suborder;

  // Sections per fibre, as slices of the sub-order.
  std::vector<std::vector<EventSet>> sections;
  for (EventId y : members(sigma)) {
    EventSet fibre(s.size());
    for (EventId k = 0; k < s.size(); ++k) {
      if (f.map[out.embedding[k]] == y) fibre.set(k);
    }
    std::vector<EventSet> choices;
    for_each_antichain(s, fibre, [&](const EventSet& a) {
      if (policy == SectionPolicy::NonEmptySections && a.none()) return;
      choices.push_back(a);
    });
    sections.push_back(std::move(choices));
  }
  EventSet acc(s.size());
  std::function<void(std::size_t)> choose = [&](std::size_t i) {
    if (i == sections.size()) {
      out.slices.push_back(acc);
      return;
    }
    for (const EventSet& g : sections[i]) {
      EventSet saved = acc;
      acc |= g;
      choose(i + 1);
      acc = saved;
    }
  };
  choose(0);
  return out;
}

}  // namespace cft
