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

#include "cft/order.hpp"

#include <algorithm>
#include <queue>

#include "cft/error.hpp"

namespace cft {

FiniteOrder FiniteOrder::from_hasse(
    std::vector<std::string> names,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::unordered_map<std::string, EventId> index;
  for (EventId i = 0; i < names.size(); ++i) {
    if (!index.emplace(names[i], i).second) {
      throw Error(ErrorCode::DuplicateEvent, "event '" + names[i] + "' listed twice");
    }
  }
  std::vector<Edge> ids;
  ids.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end()) throw Error(ErrorCode::UnknownEvent, "edge endpoint '" + a + "'");
    if (ib == index.end()) throw Error(ErrorCode::UnknownEvent, "edge endpoint '" + b + "'");
    ids.emplace_back(ia->second, ib->second);
  }
  const std::size_t n = names.size();
  return from_edges(n, ids, std::move(names));
}

FiniteOrder FiniteOrder::from_edges(std::size_t n, const std::vector<Edge>& edges,
                                    std::vector<std::string> names) {
  FiniteOrder o;
  if (names.empty()) {
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  }
  if (names.size() != n) {
    throw Error(ErrorCode::BadParams, "name list does not match event count");
  }
  o.names_ = std::move(names);
  for (EventId i = 0; i < n; ++i) {
    if (!o.index_.emplace(o.names_[i], i).second) {
      throw Error(ErrorCode::DuplicateEvent, "event '" + o.names_[i] + "' listed twice");
    }
  }
  o.succ_.assign(n, {});
  o.pred_.assign(n, {});
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw Error(ErrorCode::UnknownEvent, "edge endpoint out of range");
    if (a == b) throw Error(ErrorCode::CycleDetected, "self-loop on event '" + o.names_[a] + "'");
    o.succ_[a].push_back(b);
  }
  for (auto& s : o.succ_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  o.close();
  return o;
}

void FiniteOrder::close() {
  const std::size_t n = names_.size();
  // Kahn's algorithm; leftovers mean a directed cycle.
  std::vector<std::size_t> indeg(n, 0);
  for (EventId a = 0; a < n; ++a) {
    for (EventId b : succ_[a]) ++indeg[b];
  }
  std::priority_queue<EventId, std::vector<EventId>, std::greater<>> ready;
  for (EventId a = 0; a < n; ++a) {
    if (indeg[a] == 0) ready.push(a);
  }
  topo_.clear();
  while (!ready.empty()) {
    EventId a = ready.top();
    ready.pop();
    topo_.push_back(a);
    for (EventId b : succ_[a]) {
      if (--indeg[b] == 0) ready.push(b);
    }
  }
  if (topo_.size() != n) {
    throw Error(ErrorCode::CycleDetected, "Hasse edges contain a directed cycle");
  }

  up_.assign(n, EventSet(n));
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    EventId a = *it;
    up_[a].set(a);
    for (EventId b : succ_[a]) up_[a] |= up_[b];
  }
  down_.assign(n, EventSet(n));
  for (EventId a = 0; a < n; ++a) {
    for (auto b = up_[a].find_first(); b != EventSet::npos; b = up_[a].find_next(b)) {
      down_[b].set(a);
    }
  }

  // Transitive reduction: keep b as a cover of a unless another direct
  // successor already reaches it.
  for (EventId a = 0; a < n; ++a) {
    std::vector<EventId> covers;
    for (EventId b : succ_[a]) {
      bool redundant = false;
      for (EventId c : succ_[a]) {
        if (c != b && up_[c].test(b)) {
          redundant = true;
          break;
        }
      }
      if (!redundant) covers.push_back(b);
    }
    succ_[a] = std::move(covers);
  }
  pred_.assign(n, {});
  for (EventId a = 0; a < n; ++a) {
    for (EventId b : succ_[a]) pred_[b].push_back(a);
  }
}

std::optional<EventId> FiniteOrder::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EventId FiniteOrder::id(std::string_view name) const {
  auto found = find(name);
  if (!found) throw Error(ErrorCode::UnknownEvent, "no event named '" + std::string(name) + "'");
  return *found;
}

std::vector<FiniteOrder::Edge> FiniteOrder::hasse() const {
  std::vector<Edge> out;
  for (EventId a = 0; a < size(); ++a) {
    for (EventId b : succ_[a]) out.emplace_back(a, b);
  }
  return out;
}

EventSet FiniteOrder::set_of(const std::vector<std::string>& names) const {
  EventSet s = none();
  for (const auto& n : names) s.set(id(n));
  return s;
}

std::vector<std::string> FiniteOrder::names_of(const EventSet& s) const {
  std::vector<std::string> out;
  for (EventId x : members(s)) out.push_back(names_[x]);
  return out;
}

FiniteOrder FiniteOrder::reversed() const {
  std::vector<Edge> edges;
  for (EventId a = 0; a < size(); ++a) {
    for (EventId b : succ_[a]) edges.emplace_back(b, a);
  }
  return from_edges(size(), edges, names_);
}

std::pair<FiniteOrder, std::vector<EventId>> FiniteOrder::induced(const EventSet& s) const {
  std::vector<EventId> embed = members(s);
  std::vector<EventId> local(size(), static_cast<EventId>(-1));
  for (EventId i = 0; i < embed.size(); ++i) local[embed[i]] = i;
  // Covers of the induced order: strict relations with nothing of s between.
  std::vector<Edge> edges;
  for (EventId i = 0; i < embed.size(); ++i) {
    for (EventId j = 0; j < embed.size(); ++j) {
      if (i == j || !less(embed[i], embed[j])) continue;
      bool cover = true;
      for (EventId k = 0; k < embed.size() && cover; ++k) {
        if (k != i && k != j && less(embed[i], embed[k]) && less(embed[k], embed[j])) {
          cover = false;
        }
      }
      if (cover) edges.emplace_back(i, j);
    }
  }
  std::vector<std::string> names;
  names.reserve(embed.size());
  for (EventId x : embed) names.push_back(names_[x]);
  return {from_edges(embed.size(), edges, std::move(names)), std::move(embed)};
}

// ---------------------------------------------------------------------------

EventSet future(const FiniteOrder& order, const EventSet& a) {
  EventSet out = order.none();
  for (EventId x : members(a)) out |= order.up(x);
  return out;
}

EventSet past(const FiniteOrder& order, const EventSet& a) {
  EventSet out = order.none();
  for (EventId x : members(a)) out |= order.down(x);
  return out;
}

EventSet future_domain(const FiniteOrder& order, const EventSet& a) {
  EventSet out = order.none();
  for (EventId x : order.linear_extension()) {
    if (a.test(x)) {
      out.set(x);
      continue;
    }
    const auto& preds = order.predecessors(x);
    if (preds.empty()) continue;
    bool all = std::all_of(preds.begin(), preds.end(), [&](EventId p) { return out.test(p); });
    if (all) out.set(x);
  }
  return out;
}

EventSet past_domain(const FiniteOrder& order, const EventSet& a) {
  EventSet out = order.none();
  const auto& topo = order.linear_extension();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    EventId x = *it;
    if (a.test(x)) {
      out.set(x);
      continue;
    }
    const auto& succs = order.successors(x);
    if (succs.empty()) continue;
    bool all = std::all_of(succs.begin(), succs.end(), [&](EventId s) { return out.test(s); });
    if (all) out.set(x);
  }
  return out;
}

void for_each_causal_path(const FiniteOrder& order, EventId x, EventId y,
                          const std::function<void(const std::vector<EventId>&)>& visit) {
  if (!order.leq(x, y)) return;
  // Maximal chains of a finite interval are the saturated ones, i.e. walks
  // along Hasse edges.
  std::vector<EventId> chain{x};
  std::function<void(EventId)> walk = [&](EventId at) {
    if (at == y) {
      visit(chain);
      return;
    }
    for (EventId next : order.successors(at)) {
      if (!order.leq(next, y)) continue;
      chain.push_back(next);
      walk(next);
      chain.pop_back();
    }
  };
  walk(x);
}

std::vector<std::vector<EventId>> causal_paths(const FiniteOrder& order, EventId x, EventId y) {
  std::vector<std::vector<EventId>> out;
  for_each_causal_path(order, x, y, [&](const std::vector<EventId>& p) { out.push_back(p); });
  return out;
}

EventSet diamond(const FiniteOrder& order, EventId x, EventId y) {
  return order.up(x) & order.down(y);
}

bool is_region(const FiniteOrder& order, const EventSet& s) {
  auto ms = members(s);
  for (EventId x : ms) {
    for (EventId y : ms) {
      if (order.leq(x, y) && !diamond(order, x, y).is_subset_of(s)) return false;
    }
  }
  return true;
}

EventSet region_between(const FiniteOrder& order, const EventSet& sigma, const EventSet& gamma) {
  return future(order, sigma) & past(order, gamma);
}

EventSet minimal_elements(const FiniteOrder& order, const EventSet& s) {
  EventSet out = s;
  for (EventId x : members(s)) {
    EventSet below = order.down(x) & s;
    below.reset(x);
    if (below.any()) out.reset(x);
  }
  return out;
}

EventSet maximal_elements(const FiniteOrder& order, const EventSet& s) {
  EventSet out = s;
  for (EventId x : members(s)) {
    EventSet above = order.up(x) & s;
    above.reset(x);
    if (above.any()) out.reset(x);
  }
  return out;
}

bool is_antichain(const FiniteOrder& order, const EventSet& s) {
  for (EventId x : members(s)) {
    EventSet rel = (order.up(x) | order.down(x)) & s;
    rel.reset(x);
    if (rel.any()) return false;
  }
  return true;
}

void for_each_antichain(const FiniteOrder& order, const EventSet& within,
                        const std::function<void(const EventSet&)>& visit) {
  const std::vector<EventId> candidates = members(within);
  EventSet current = order.none();
  // `allowed` holds the candidates not comparable with anything chosen so
  // far; each branch only looks at larger indices, so no set repeats.
  std::function<void(std::size_t, const EventSet&)> grow = [&](std::size_t from,
                                                               const EventSet& allowed) {
    visit(current);
    for (std::size_t i = from; i < candidates.size(); ++i) {
      EventId x = candidates[i];
      if (!allowed.test(x)) continue;
      current.set(x);
      EventSet next = allowed;
      next -= order.up(x);
      next -= order.down(x);
      grow(i + 1, next);
      current.reset(x);
    }
  };
  grow(0, within);
}

}  // namespace cft
