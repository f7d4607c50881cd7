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

#include "cft/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "cft/error.hpp"

namespace cft {

std::string to_string(const LatticeEvent& e) {
  std::string out = std::to_string(e.t);
  for (int xi : e.x) {
    out += ',';
    out += std::to_string(xi);
  }
  return out;
}

LatticeEvent parse_event(std::string_view text, int d) {
  std::vector<int> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view piece = text.substr(pos, comma == std::string_view::npos ? text.size() - pos
                                                                              : comma - pos);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    int value = 0;
    auto [end, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || end != piece.data() + piece.size() || piece.empty()) {
      throw Error(ErrorCode::BadParams, "malformed lattice event '" + std::string(text) + "'");
    }
    parts.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(parts.size()) != d + 1) {
    throw Error(ErrorCode::BadParams, "lattice event '" + std::string(text) + "' needs " +
                                          std::to_string(d + 1) + " coordinates");
  }
  return {parts[0], Coord(parts.begin() + 1, parts.end())};
}

namespace {

constexpr int kMaxDim = 8;

std::vector<Coord> build_neighbourhood(int d) {
  std::vector<Coord> out;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    Coord c(d);
    // Most significant bit is the first axis, so the listing is lexicographic.
    for (int i = 0; i < d; ++i) c[i] = (mask >> (d - 1 - i)) & 1u ? 1 : -1;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

const std::vector<Coord>& neighbourhood(int d) {
  static const std::vector<std::vector<Coord>> table = [] {
    std::vector<std::vector<Coord>> t(kMaxDim + 1);
    for (int i = 1; i <= kMaxDim; ++i) t[i] = build_neighbourhood(i);
    return t;
  }();
  if (d < 1 || d > kMaxDim) {
    throw Error(ErrorCode::BadParams, "lattice dimension must be in 1.." + std::to_string(kMaxDim));
  }
  return table[d];
}

std::vector<Coord> iterated_neighbourhood(int k, int d) {
  if (k < 0) throw Error(ErrorCode::NegativeTimeGap, "iterated neighbourhood of negative order");
  std::vector<Coord> out{Coord(d, -k)};
  // Odometer over the d-fold product of {-k, -k+2, ..., k}.
  while (true) {
    Coord next = out.back();
    int i = d - 1;
    while (i >= 0 && next[i] == k) {
      next[i] = -k;
      --i;
    }
    if (i < 0) break;
    next[i] += 2;
    out.push_back(std::move(next));
  }
  return out;
}

DiamondLattice::DiamondLattice(int d, int period) : d_(d), period_(period) {
  if (d < 1 || d > kMaxDim) {
    throw Error(ErrorCode::BadParams, "lattice dimension must be in 1.." + std::to_string(kMaxDim));
  }
  if (period < 0 || (period > 0 && (period % 2 != 0 || period < 4))) {
    throw Error(ErrorCode::BadParams, "lattice period must be even and at least 4");
  }
}

bool DiamondLattice::contains(const LatticeEvent& e) const {
  if (static_cast<int>(e.x.size()) != d_) return false;
  for (int xi : e.x) {
    if (((xi - e.t) % 2 + 2) % 2 != 0) return false;
    if (periodic() && (xi < 0 || xi >= period_)) return false;
  }
  return true;
}

void DiamondLattice::require(const LatticeEvent& e) const {
  if (!contains(e)) {
    throw Error(ErrorCode::UnknownEvent, "(" + to_string(e) + ") is not a lattice event");
  }
}

Coord DiamondLattice::wrap(Coord x) const {
  if (periodic()) {
    for (int& xi : x) xi = ((xi % period_) + period_) % period_;
  }
  return x;
}

int DiamondLattice::distance(int a, int b) const {
  int delta = std::abs(a - b);
  if (periodic()) {
    delta %= period_;
    delta = std::min(delta, period_ - delta);
  }
  return delta;
}

bool DiamondLattice::leq(const LatticeEvent& a, const LatticeEvent& b) const {
  require(a);
  require(b);
  int k = b.t - a.t;
  if (k < 0) return false;
  for (int i = 0; i < d_; ++i) {
    if (distance(a.x[i], b.x[i]) > k) return false;
  }
  return true;
}

namespace {

std::vector<LatticeEvent> shifted(const DiamondLattice& lat, const LatticeEvent& e, int sign) {
  std::vector<LatticeEvent> out;
  for (const Coord& delta : neighbourhood(lat.dim())) {
    Coord x = e.x;
    for (int i = 0; i < lat.dim(); ++i) x[i] += sign * delta[i];
    LatticeEvent n{e.t + sign, lat.wrap(std::move(x))};
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(std::move(n));
  }
  return out;
}

}  // namespace

std::vector<LatticeEvent> DiamondLattice::successors(const LatticeEvent& e) const {
  require(e);
  return shifted(*this, e, +1);
}

std::vector<LatticeEvent> DiamondLattice::predecessors(const LatticeEvent& e) const {
  require(e);
  return shifted(*this, e, -1);
}

// ---------------------------------------------------------------------------

LatticeWindow::LatticeWindow(DiamondLattice lattice, Window window)
    : lattice_(std::move(lattice)), window_(window) {
  if (window_.t1 < window_.t0) throw Error(ErrorCode::BadParams, "empty time window");
  if (!lattice_.periodic() && window_.hi - window_.lo < 1) {
    throw Error(ErrorCode::BadParams, "coordinate box must span at least two values");
  }
  for (int t = window_.t0; t <= window_.t1; ++t) {
    for (Coord& x : sites(t)) {
      LatticeEvent e{t, std::move(x)};
      index_.emplace(e, events_.size());
      events_.push_back(std::move(e));
    }
  }
  std::vector<FiniteOrder::Edge> edges;
  std::vector<std::string> names;
  names.reserve(events_.size());
  for (EventId a = 0; a < events_.size(); ++a) {
    names.push_back(to_string(events_[a]));
    if (events_[a].t == window_.t1) continue;
    for (const LatticeEvent& s : lattice_.successors(events_[a])) {
      if (auto b = find(s)) edges.emplace_back(a, *b);
    }
  }
  order_ = std::make_shared<const FiniteOrder>(
      FiniteOrder::from_edges(events_.size(), edges, std::move(names)));
}

std::optional<EventId> LatticeWindow::find(const LatticeEvent& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EventId LatticeWindow::id(const LatticeEvent& e) const {
  auto found = find(e);
  if (!found) {
    throw Error(ErrorCode::UnknownEvent, "(" + to_string(e) + ") is outside the window");
  }
  return *found;
}

std::vector<Coord> LatticeWindow::sites(int t) const {
  std::vector<Coord> out;
  if (!contains_time(t)) return out;
  const int d = lattice_.dim();
  const int lo = lattice_.periodic() ? 0 : window_.lo;
  const int hi = lattice_.periodic() ? lattice_.period() - 1 : window_.hi;
  int first = lo;
  if (((first - t) % 2 + 2) % 2 != 0) ++first;
  if (first > hi) return out;
  Coord x(d, first);
  while (true) {
    out.push_back(x);
    int i = d - 1;
    while (i >= 0 && x[i] + 2 > hi) {
      x[i] = first;
      --i;
    }
    if (i < 0) break;
    x[i] += 2;
  }
  return out;
}

EventSet LatticeWindow::row(int t) const {
  EventSet s(size());
  for (Coord& x : sites(t)) s.set(index_.at(LatticeEvent{t, std::move(x)}));
  return s;
}

EventSet LatticeWindow::set_of(const std::vector<LatticeEvent>& events) const {
  EventSet s(size());
  for (const auto& e : events) s.set(id(e));
  return s;
}

namespace {

// Shared recursion for D+ (sign = -1 looks at predecessors) and D- (sign =
// +1 looks at successors). Neighbours missing from the window count as
// outside the domain.
EventSet lattice_domain(const LatticeWindow& w, const EventSet& a, bool future) {
  const FiniteOrder& order = w.order();
  EventSet out(w.size());
  const auto& topo = order.linear_extension();
  auto visit = [&](EventId x) {
    if (a.test(x)) {
      out.set(x);
      return;
    }
    const LatticeEvent& e = w.event(x);
    auto neighbours = future ? w.lattice().predecessors(e) : w.lattice().successors(e);
    for (const auto& n : neighbours) {
      auto id = w.find(n);
      if (!id || !out.test(*id)) return;
    }
    out.set(x);
  };
  if (future) {
    for (EventId x : topo) visit(x);
  } else {
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) visit(*it);
  }
  return out;
}

}  // namespace

EventSet lattice_future_domain(const LatticeWindow& w, const EventSet& a) {
  return lattice_domain(w, a, true);
}

EventSet lattice_past_domain(const LatticeWindow& w, const EventSet& a) {
  return lattice_domain(w, a, false);
}

EventSet lattice_future(const LatticeWindow& w, const EventSet& a) {
  return future(w.order(), a);
}

EventSet lattice_past(const LatticeWindow& w, const EventSet& a) {
  return past(w.order(), a);
}

}  // namespace cft
