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

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace cft {

using EventId = std::size_t;

/// A subset of the events of one finite order, one bit per event.
using EventSet = boost::dynamic_bitset<std::uint64_t>;

inline EventSet make_set(std::size_t universe, std::initializer_list<EventId> ids) {
  EventSet s(universe);
  for (EventId id : ids) s.set(id);
  return s;
}

inline EventSet make_set(std::size_t universe, const std::vector<EventId>& ids) {
  EventSet s(universe);
  for (EventId id : ids) s.set(id);
  return s;
}

inline std::vector<EventId> members(const EventSet& s) {
  std::vector<EventId> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != EventSet::npos; i = s.find_next(i)) {
    out.push_back(i);
  }
  return out;
}

inline bool subset_of(const EventSet& a, const EventSet& b) { return a.is_subset_of(b); }

}  // namespace cft
