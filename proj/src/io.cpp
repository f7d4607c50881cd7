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

#include "cft/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cft/error.hpp"

namespace cft {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadConfig, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be a list");
  std::vector<std::string> out;
  for (const json& e : j) {
    if (!e.is_string()) bad(std::string(what) + " must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::pair<int, int> range(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    bad(std::string(what) + " must be [from, to]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

Complex entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  bad("matrix entries are numbers or [re, im] pairs");
}

json entry_json(Complex c) { return json::array({c.real(), c.imag()}); }

Scattering scattering_from_json(const json& j, Backend backend) {
  if (j.is_array()) {
    std::vector<CMatrix> ops;
    for (const json& m : j) ops.push_back(cmatrix_from_json(m));
    return ops;
  }
  if (backend == Backend::Classical) return rmatrix_from_json(j);
  return cmatrix_from_json(j);
}

json scattering_to_json(const Scattering& s) {
  if (const auto* u = std::get_if<CMatrix>(&s)) return matrix_to_json(*u);
  if (const auto* ks = std::get_if<std::vector<CMatrix>>(&s)) {
    json out = json::array();
    for (const CMatrix& k : *ks) out.push_back(matrix_to_json(k));
    return out;
  }
  return matrix_to_json(std::get<RMatrix>(s));
}

}  // namespace

json order_to_json(const FiniteOrder& order) {
  json hasse = json::array();
  for (const auto& [a, b] : order.hasse()) hasse.push_back({order.name(a), order.name(b)});
  return {{"events", order.names()}, {"hasse", hasse}};
}

FiniteOrder order_from_json(const json& j) {
  std::vector<std::string> names = string_list(field(j, "events"), "events");
  std::vector<std::pair<std::string, std::string>> edges;
  const json& hasse = j.contains("hasse") ? j.at("hasse") : json::array();
  if (!hasse.is_array()) bad("hasse must be a list of pairs");
  for (const json& e : hasse) {
    auto pair = string_list(e, "hasse pair");
    if (pair.size() != 2) bad("hasse entries are [from, to] pairs");
    edges.emplace_back(pair[0], pair[1]);
  }
  return FiniteOrder::from_hasse(std::move(names), edges);
}

LoadedOrder load_order(const json& j) {
  if (!j.is_object()) bad("an order is a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "events" && key != "hasse" && key != "collapse" && key != "lattice" && key != "window") {
      bad("unknown order key \"" + key + "\"");
    }
  }
  LoadedOrder out;
  if (j.is_object() && j.contains("lattice")) {
    const json& lat = j.at("lattice");
    const int d = field(lat, "d").get<int>();
    const int period = lat.value("period", 0);
    DiamondLattice lattice(d, period);
    if (!j.contains("window")) {
      throw Error(ErrorCode::UnboundedQuery, "a lattice needs a window before it can be enumerated");
    }
    const auto [t0, t1] = range(field(j.at("window"), "t"), "window t");
    Window w{t0, t1, 0, period > 0 ? period - 1 : 0};
    if (j.at("window").contains("x")) {
      std::tie(w.lo, w.hi) = range(j.at("window").at("x"), "window x");
    } else if (period == 0) {
      bad("a window on the plane needs an x range");
    }
    out.window = std::make_shared<const LatticeWindow>(lattice, w);
    out.order = out.window->order_ptr();
    return out;
  }
  out.order = std::make_shared<const FiniteOrder>(order_from_json(j));
  if (j.contains("collapse")) out.collapse = morphism_from_json(out.order, j.at("collapse"));
  return out;
}

json window_to_json(const LatticeWindow& w) {
  json lattice = {{"d", w.lattice().dim()}};
  if (w.lattice().periodic()) lattice["period"] = w.lattice().period();
  return {{"lattice", lattice},
          {"window", {{"t", {w.window().t0, w.window().t1}}, {"x", {w.window().lo, w.window().hi}}}}};
}

json slice_to_json(const FiniteOrder& order, const EventSet& s) {
  return {{"events", order.names_of(s)}};
}

EventSet slice_from_json(const FiniteOrder& order, const json& j) {
  const json& list = j.is_object() ? field(j, "events") : j;
  EventSet s = order.set_of(string_list(list, "slice events"));
  if (!is_slice(order, s)) bad("slice events must be pairwise unrelated");
  return s;
}

json foliation_to_json(const FiniteOrder& order, const Foliation& f) {
  json leaves = json::array();
  for (const EventSet& l : f.leaves) leaves.push_back(order.names_of(l));
  return {{"leaves", leaves}};
}

Foliation foliation_from_json(const FiniteOrder& order, const json& j) {
  const json& list = j.is_object() ? field(j, "leaves") : j;
  if (!list.is_array()) bad("leaves must be a list");
  Foliation f;
  for (const json& leaf : list) f.leaves.push_back(order.set_of(string_list(leaf, "leaf")));
  return f;
}

json morphism_to_json(const OrderMorphism& f) {
  json map = json::object();
  for (EventId x = 0; x < f.dom->size(); ++x) map[f.dom->name(x)] = f.cod->name(f.map[x]);
  return {{"codomain", order_to_json(*f.cod)}, {"map", map}};
}

OrderMorphism morphism_from_json(std::shared_ptr<const FiniteOrder> dom, const json& j) {
  auto cod = std::make_shared<const FiniteOrder>(order_from_json(field(j, "codomain")));
  const json& map = field(j, "map");
  if (!map.is_object()) bad("map must be an object from event to event");
  std::vector<EventId> m(dom->size());
  for (EventId x = 0; x < dom->size(); ++x) {
    if (!map.contains(dom->name(x))) bad("map misses event " + dom->name(x));
    const json& y = map.at(dom->name(x));
    if (!y.is_string()) bad("map values are event names");
    m[x] = cod->id(y.get<std::string>());
  }
  return make_morphism(std::move(dom), std::move(cod), std::move(m));
}

json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(entry_json(m(r, c)));
  }
  return {{"shape", {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())}}, {"data", data}};
}

json matrix_to_json(const RMatrix& m) { return matrix_to_json(CMatrix(m.cast<Complex>())); }

CMatrix cmatrix_from_json(const json& j) {
  const json& shape = field(j, "shape");
  auto extent = [](const json& v) { return v.is_number_integer() && v.get<long long>() >= 0; };
  if (!shape.is_array() || shape.size() != 2 || !extent(shape[0]) || !extent(shape[1])) {
    bad("shape must be [rows, cols]");
  }
  const auto rows = shape[0].get<Eigen::Index>();
  const auto cols = shape[1].get<Eigen::Index>();
  const json& data = field(j, "data");
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    bad("matrix data does not match its shape");
  }
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry(data[static_cast<std::size_t>(r * cols + c)]);
  }
  return m;
}

RMatrix rmatrix_from_json(const json& j) {
  CMatrix m = cmatrix_from_json(j);
  if (m.size() > 0 && m.imag().cwiseAbs().maxCoeff() != 0.0) bad("real matrix with imaginary entries");
  return m.real();
}

json state_to_json(const ProcState& s) {
  json out = {{"backend", std::string(to_string(s.backend()))}, {"factors", s.object().factors()}};
  if (s.backend() == Backend::Quantum) {
    out["density"] = matrix_to_json(s.density());
  } else {
    out["probabilities"] = std::vector<double>(s.probabilities().data(),
                                               s.probabilities().data() + s.probabilities().size());
  }
  return out;
}

ProcState state_from_json(const json& j) {
  const std::string backend = j.value("backend", std::string("quantum"));
  const auto factors = field(j, "factors").get<std::vector<std::size_t>>();
  if (backend == "classical") {
    ProcObject obj(Backend::Classical, factors);
    const auto p = field(j, "probabilities").get<std::vector<double>>();
    if (p.size() != obj.dim()) throw Error(ErrorCode::ShapeMismatch, "probabilities do not match the object");
    return ProcState(obj, RVector(Eigen::Map<const RVector>(p.data(), static_cast<Eigen::Index>(p.size()))));
  }
  if (backend != "quantum") bad("backend must be \"quantum\" or \"classical\"");
  ProcObject obj(Backend::Quantum, factors);
  if (j.contains("vector")) {
    const json& v = j.at("vector");
    if (!v.is_array() || v.size() != obj.dim()) throw Error(ErrorCode::ShapeMismatch, "vector does not match the object");
    CVector psi(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) psi(static_cast<Eigen::Index>(i)) = entry(v[i]);
    return ProcState::pure(obj, psi);
  }
  return ProcState(obj, cmatrix_from_json(field(j, "density")));
}

PartitionedCCAConfig cca_config_from_json(const json& j) {
  if (!j.is_object()) bad("a CCA config is a JSON object");
  PartitionedCCAConfig c;
  if (j.contains("dirac")) {
    const json& dj = j.at("dirac");
    c = dirac_config(field(dj, "m").get<double>(), field(dj, "eps").get<double>());
  } else {
    c.d = field(j, "d").get<int>();
    c.cell_dim = field(j, "cell_dim").get<std::size_t>();
    const std::string backend = j.value("backend", std::string("quantum"));
    if (backend == "classical") {
      c.backend = Backend::Classical;
    } else if (backend != "quantum") {
      bad("backend must be \"quantum\" or \"classical\"");
    }
    c.U = scattering_from_json(field(j, "U"), c.backend);
    if (j.contains("U_inv")) c.U_inv = scattering_from_json(j.at("U_inv"), c.backend);
  }
  if (j.contains("overrides")) {
    for (const json& o : j.at("overrides")) {
      c.overrides[parse_event(field(o, "event").get<std::string>(), c.d)] =
          scattering_from_json(field(o, "U"), c.backend);
    }
  }
  validate_config(c);
  return c;
}

json cca_config_to_json(const PartitionedCCAConfig& c) {
  json out = {{"d", c.d},
              {"cell_dim", c.cell_dim},
              {"backend", std::string(to_string(c.backend))},
              {"U", scattering_to_json(c.U)}};
  if (c.U_inv) out["U_inv"] = scattering_to_json(*c.U_inv);
  if (!c.overrides.empty()) {
    json list = json::array();
    for (const auto& [e, s] : c.overrides) list.push_back({{"event", to_string(e)}, {"U", scattering_to_json(s)}});
    out["overrides"] = list;
  }
  return out;
}

std::string to_dot(const FiniteOrder& order) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"' || ch == '\\') q += '\\';
      q += ch;
    }
    return q + "\"";
  };
  std::ostringstream out;
  out << "digraph order {\n  rankdir=BT;\n";
  for (EventId x : order.linear_extension()) out << "  " << quote(order.name(x)) << ";\n";
  for (const auto& [a, b] : order.hasse()) {
    out << "  " << quote(order.name(a)) << " -> " << quote(order.name(b)) << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string marginals_csv(const std::vector<MarginalRow>& rows) {
  std::string out = "time,site,probability\n";
  char buf[64];
  for (const MarginalRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", r.time, r.site, r.probability);
    out += buf;
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOError, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorCode::IOError, "cannot write " + path);
}

}  // namespace cft
