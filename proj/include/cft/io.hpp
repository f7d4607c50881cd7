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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cft/cca.hpp"
#include "cft/lattice.hpp"
#include "cft/morphism.hpp"
#include "cft/order.hpp"
#include "cft/process.hpp"
#include "cft/slices.hpp"

namespace cft {

using json = nlohmann::json;

/// { "events": [name], "hasse": [[name, name]] }.
json order_to_json(const FiniteOrder& order);
/// Throws BadConfig on malformed input, plus the order construction errors.
FiniteOrder order_from_json(const json& j);

/// An order read from a file: either explicit, or a lattice
/// { "lattice": {"d": int, "period": int?}, "window": {"t": [t0, t1],
/// "x": [lo, hi]} } which is materialised; an explicit order may carry a
/// "collapse" morphism.
struct LoadedOrder {
  std::shared_ptr<const FiniteOrder> order;
  std::shared_ptr<const LatticeWindow> window;
  std::optional<OrderMorphism> collapse;
};
/// Throws UnboundedQuery for a lattice without a window.
LoadedOrder load_order(const json& j);
json window_to_json(const LatticeWindow& w);

/// { "events": [name] }; a bare list of names is accepted on input. Throws
/// BadConfig when two events are related.
json slice_to_json(const FiniteOrder& order, const EventSet& s);
EventSet slice_from_json(const FiniteOrder& order, const json& j);
/// { "leaves": [[name]] }; a bare list of leaves is accepted on input.
json foliation_to_json(const FiniteOrder& order, const Foliation& f);
Foliation foliation_from_json(const FiniteOrder& order, const json& j);

/// { "codomain": order, "map": {name: name} }.
json morphism_to_json(const OrderMorphism& f);
OrderMorphism morphism_from_json(std::shared_ptr<const FiniteOrder> dom, const json& j);

/// { "shape": [rows, cols], "data": [[re, im], ...] } in row-major order.
json matrix_to_json(const CMatrix& m);
json matrix_to_json(const RMatrix& m);
CMatrix cmatrix_from_json(const json& j);
/// Throws BadConfig on a non-zero imaginary part.
RMatrix rmatrix_from_json(const json& j);

/// { "backend", "factors", "density" | "probabilities" }; on input a pure
/// state { "factors", "vector": [[re, im], ...] } is also accepted.
json state_to_json(const ProcState& s);
ProcState state_from_json(const json& j);

/// { "d", "cell_dim", "backend", "U", "U_inv"? }. "U" and "U_inv" may be a
/// matrix or a list of Kraus matrices; { "dirac": {"m", "eps"} } builds the
/// Dirac automaton; "overrides": [{"event": "t,x", "U": ...}] makes it
/// inhomogeneous. Throws BadConfig.
PartitionedCCAConfig cca_config_from_json(const json& j);
json cca_config_to_json(const PartitionedCCAConfig& c);

/// One node per event in a linear extension, one edge per Hasse pair.
std::string to_dot(const FiniteOrder& order);

struct MarginalRow {
  int time = 0;
  int site = 0;
  double probability = 0.0;
};
/// Header "time,site,probability".
std::string marginals_csv(const std::vector<MarginalRow>& rows);

/// Throws IOError.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cft
