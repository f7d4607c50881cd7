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

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cft/event_set.hpp"

namespace cft {

/// A finite causal order stored as its Hasse diagram together with the full
/// reachability closure (one bitset per event in each direction).
///
/// Events are dense indices `0..size()-1`; every event also carries a
/// string name which is what the JSON formats and the CLI use.
class FiniteOrder {
 public:
  using Edge = std::pair<EventId, EventId>;

  FiniteOrder() = default;

  /// Builds the order whose relation is the reflexive-transitive closure of
  /// `edges`. Redundant (non-covering) edges are accepted and dropped from
  /// the stored Hasse diagram. Throws CycleDetected / DuplicateEvent /
  /// UnknownEvent.
  static FiniteOrder from_hasse(
      std::vector<std::string> names,
      const std::vector<std::pair<std::string, std::string>>& edges);

  /// Same as from_hasse, with edges given by index. Names default to "0",
  /// "1", ...
  static FiniteOrder from_edges(std::size_t n, const std::vector<Edge>& edges,
                                std::vector<std::string> names = {});

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  const std::string& name(EventId x) const { return names_.at(x); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<EventId> find(std::string_view name) const;
  /// Throws UnknownEvent.
  EventId id(std::string_view name) const;

  bool leq(EventId x, EventId y) const { return up_[x].test(y); }
  bool less(EventId x, EventId y) const { return x != y && up_[x].test(y); }
  bool related(EventId x, EventId y) const { return leq(x, y) || leq(y, x); }

  /// The principal up-set {y : x <= y} and down-set {y : y <= x}.
  const EventSet& up(EventId x) const { return up_[x]; }
  const EventSet& down(EventId x) const { return down_[x]; }

  /// Immediate successors / predecessors (Hasse neighbours).
  const std::vector<EventId>& successors(EventId x) const { return succ_[x]; }
  const std::vector<EventId>& predecessors(EventId x) const { return pred_[x]; }

  bool is_minimal(EventId x) const { return pred_[x].empty(); }
  bool is_maximal(EventId x) const { return succ_[x].empty(); }

  std::vector<Edge> hasse() const;

  /// Events sorted so that x < y implies x comes first.
  const std::vector<EventId>& linear_extension() const { return topo_; }

  EventSet none() const { return EventSet(size()); }
  EventSet all() const {
    EventSet s(size());
    s.set();
    return s;
  }

  /// Throws UnknownEvent if any name is missing.
  EventSet set_of(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(const EventSet& s) const;

  /// The causal reverse: same events, relation transposed.
  FiniteOrder reversed() const;

  /// The causal sub-order induced on `s`. The second member maps each event
  /// of the sub-order to its id in this order.
  std::pair<FiniteOrder, std::vector<EventId>> induced(const EventSet& s) const;

  friend bool operator==(const FiniteOrder& a, const FiniteOrder& b) {
    return a.names_ == b.names_ && a.up_ == b.up_;
  }

 private:
  void close();

  std::vector<std::string> names_;
  std::unordered_map<std::string, EventId> index_;
  std::vector<std::vector<EventId>> succ_;
  std::vector<std::vector<EventId>> pred_;
  std::vector<EventSet> up_;
  std::vector<EventSet> down_;
  std::vector<EventId> topo_;
};

// -- order-theoretic constructions ------------------------------------------

EventSet future(const FiniteOrder& order, const EventSet& a);
EventSet past(const FiniteOrder& order, const EventSet& a);

/// D+(A): events every causal path from -infinity to which meets A.
/// Computed by the recursion "x in A, or x is not minimal and all immediate
/// predecessors of x are in D+(A)".
EventSet future_domain(const FiniteOrder& order, const EventSet& a);
/// D-(A), the time dual of future_domain.
EventSet past_domain(const FiniteOrder& order, const EventSet& a);

/// Calls `visit` once per maximal chain from x to y (as a list of events in
/// increasing order). Nothing is visited unless x <= y.
void for_each_causal_path(const FiniteOrder& order, EventId x, EventId y,
                          const std::function<void(const std::vector<EventId>&)>& visit);
std::vector<std::vector<EventId>> causal_paths(const FiniteOrder& order, EventId x,
                                               EventId y);

/// The interval {z : x <= z <= y}; empty unless x <= y.
EventSet diamond(const FiniteOrder& order, EventId x, EventId y);

/// Convexity: every diamond between members stays inside.
bool is_region(const FiniteOrder& order, const EventSet& s);

/// Union of the diamonds between members of sigma and members of gamma,
/// i.e. future(sigma) ∩ past(gamma).
EventSet region_between(const FiniteOrder& order, const EventSet& sigma,
                        const EventSet& gamma);

EventSet minimal_elements(const FiniteOrder& order, const EventSet& s);
EventSet maximal_elements(const FiniteOrder& order, const EventSet& s);

bool is_antichain(const FiniteOrder& order, const EventSet& s);

/// Enumerates every antichain contained in `within` (including the empty
/// one) exactly once, in a canonical order. Exponential in the width of the
/// order; intended for a few tens of events.
void for_each_antichain(const FiniteOrder& order, const EventSet& within,
                        const std::function<void(const EventSet&)>& visit);

}  // namespace cft
