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
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cft/event_set.hpp"
#include "cft/order.hpp"

namespace cft {

using Coord = std::vector<int>;

/// An event (t, x) of the (1+d) diamond lattice.
struct LatticeEvent {
  int t = 0;
  Coord x;

  auto operator<=>(const LatticeEvent&) const = default;
};

/// "t,x1,...,xd".
std::string to_string(const LatticeEvent& e);
/// Inverse of to_string. Throws BadParams on malformed text or when the
/// number of spatial coordinates differs from `d`.
LatticeEvent parse_event(std::string_view text, int d);

/// The neighbourhood {±1}^d, in lexicographic sign order (-1 before +1).
const std::vector<Coord>& neighbourhood(int d);

/// N^(k) = N + ... + N (k terms), N^(0) = {0}: the d-fold product of
/// {-k, -k+2, ..., k}, in lexicographic order.
std::vector<Coord> iterated_neighbourhood(int k, int d);

/// The implicit (1+d) diamond lattice: events (t, x) with every x_i ≡ t
/// (mod 2); (t, x) <= (t', x') iff k = t' - t >= 0 and |x'_i - x_i| <= k.
///
/// With `period` P > 0 the spatial coordinates live on the ring Z/P (P even,
/// at least 4) and distances are taken cyclically. Coordinates of periodic
/// events are kept in [0, P).
class DiamondLattice {
 public:
  explicit DiamondLattice(int d, int period = 0);

  int dim() const { return d_; }
  int period() const { return period_; }
  bool periodic() const { return period_ > 0; }

  bool contains(const LatticeEvent& e) const;
  /// Throws UnknownEvent unless contains(e).
  void require(const LatticeEvent& e) const;

  /// Reduces coordinates onto [0, P); identity on the plane.
  Coord wrap(Coord x) const;
  /// Spatial separation along one axis (cyclic when periodic).
  int distance(int a, int b) const;

  bool leq(const LatticeEvent& a, const LatticeEvent& b) const;

  /// (t+1, x+N) and (t-1, x-N), in neighbourhood order (wrapped; on very
  /// small rings duplicates are removed).
  std::vector<LatticeEvent> successors(const LatticeEvent& e) const;
  std::vector<LatticeEvent> predecessors(const LatticeEvent& e) const;

  friend bool operator==(const DiamondLattice&, const DiamondLattice&) = default;

 private:
  int d_;
  int period_;
};

/// A finite time window [t0, t1] and coordinate box [lo, hi]^d. The box is
/// ignored for periodic lattices, whose rows are whole rings.
struct Window {
  int t0 = 0;
  int t1 = 0;
  int lo = 0;
  int hi = 0;
};

/// The finite causal sub-order of a lattice cut out by a window, with the
/// coordinates of each materialised event.
class LatticeWindow {
 public:
  LatticeWindow(DiamondLattice lattice, Window window);

  const DiamondLattice& lattice() const { return lattice_; }
  const Window& window() const { return window_; }
  const FiniteOrder& order() const { return *order_; }
  std::shared_ptr<const FiniteOrder> order_ptr() const { return order_; }
  std::size_t size() const { return events_.size(); }

  const LatticeEvent& event(EventId id) const { return events_.at(id); }
  const std::vector<LatticeEvent>& events() const { return events_; }
  std::optional<EventId> find(const LatticeEvent& e) const;
  /// Throws UnknownEvent for events outside the window.
  EventId id(const LatticeEvent& e) const;
  bool contains(const LatticeEvent& e) const { return find(e).has_value(); }
  bool contains_time(int t) const { return t >= window_.t0 && t <= window_.t1; }

  /// Spatial sites of row t inside the window, sorted.
  std::vector<Coord> sites(int t) const;
  /// All events of row t.
  EventSet row(int t) const;
  EventSet set_of(const std::vector<LatticeEvent>& events) const;

 private:
  DiamondLattice lattice_;
  Window window_;
  std::vector<LatticeEvent> events_;
  std::map<LatticeEvent, EventId> index_;
  std::shared_ptr<const FiniteOrder> order_;
};

/// D+(A) of the infinite lattice, truncated to the window. Exact for any A
/// inside the window: events outside the box or before t0 can never lie in
/// the domain of a set inside it.
EventSet lattice_future_domain(const LatticeWindow& w, const EventSet& a);
/// D-(A), the time dual.
EventSet lattice_past_domain(const LatticeWindow& w, const EventSet& a);

/// Future / past cones truncated to the window.
EventSet lattice_future(const LatticeWindow& w, const EventSet& a);
EventSet lattice_past(const LatticeWindow& w, const EventSet& a);

}  // namespace cft
