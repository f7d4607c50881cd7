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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>

#include "cft/error.hpp"
#include "cft/generators.hpp"
#include "cft/io.hpp"
#include "support/oracles.hpp"

using namespace cft;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IOError;
}

std::size_t count_edges(const std::string& dot) {
  std::size_t n = 0;
  for (std::size_t pos = dot.find(" -> "); pos != std::string::npos; pos = dot.find(" -> ", pos + 1)) ++n;
  return n;
}

std::shared_ptr<const FiniteOrder> chain3() {
  return std::make_shared<const FiniteOrder>(FiniteOrder::from_hasse({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}));
}

}  // namespace

TEST(OrderJson, RoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FiniteOrder o = random_order(8, 0.3, seed);
    const json j = order_to_json(o);
    FiniteOrder back = order_from_json(j);
    EXPECT_EQ(back, o);
    EXPECT_EQ(order_to_json(back), j);
  }
}

TEST(OrderJson, Errors) {
  EXPECT_EQ(code_of([] { order_from_json(json::array()); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] { load_order(json{{"events", {"a"}}, {"relations", json::array()}}); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] { order_from_json(json{{"events", {"a", "a"}}, {"hasse", json::array()}}); }),
            ErrorCode::DuplicateEvent);
  EXPECT_EQ(code_of([] { order_from_json(json{{"events", {"a"}}, {"hasse", json::array({json::array({"a", "z"})})}}); }),
            ErrorCode::UnknownEvent);
  EXPECT_EQ(code_of([] { order_from_json(json{{"events", {"a", "b"}}, {"hasse", json::array({json::array({"a", "b"}), json::array({"b", "a"})})}}); }),
            ErrorCode::CycleDetected);
  EXPECT_EQ(code_of([] { load_order(json{{"lattice", {{"d", 1}}}}); }), ErrorCode::UnboundedQuery);
}

TEST(OrderJson, LatticeWindow) {
  LoadedOrder l = load_order(json{{"lattice", {{"d", 1}}}, {"window", {{"t", {0, 2}}, {"x", {-2, 2}}}}});
  ASSERT_TRUE(l.window);
  EXPECT_EQ(l.order->size(), l.window->size());
  EXPECT_EQ(l.window->window().t1, 2);
  LoadedOrder again = load_order(window_to_json(*l.window));
  EXPECT_EQ(*again.order, *l.order);
  LoadedOrder ring = load_order(json{{"lattice", {{"d", 1}, {"period", 6}}}, {"window", {{"t", {0, 1}}}}});
  EXPECT_EQ(ring.order->size(), 6U);
}

TEST(SliceJson, RoundTrip) {
  auto o = chain3();
  FiniteOrder fork = FiniteOrder::from_hasse({"r", "x", "y"}, {{"r", "x"}, {"r", "y"}});
  EventSet s = fork.set_of({"x", "y"});
  EXPECT_EQ(slice_from_json(fork, slice_to_json(fork, s)), s);
  EXPECT_EQ(slice_from_json(fork, json{"y", "x"}), s);
  EXPECT_EQ(code_of([&] { slice_from_json(*o, json{"a", "b"}); }), ErrorCode::BadConfig);
  Foliation f{{o->set_of({"a"}), o->set_of({"b"}), o->set_of({"c"})}};
  Foliation g = foliation_from_json(*o, foliation_to_json(*o, f));
  EXPECT_EQ(g.leaves, f.leaves);
  EXPECT_EQ(foliation_from_json(*o, json{{"a"}, {"b"}, {"c"}}).leaves, f.leaves);
}

TEST(MorphismJson, RoundTripAndHoneycombCollapse) {
  Honeycomb h = honeycomb(DiamondLattice(1), Window{0, 2, -2, 2});
  OrderMorphism back = morphism_from_json(h.order, morphism_to_json(h.collapse));
  EXPECT_EQ(back.map, h.collapse.map);
  EXPECT_EQ(*back.cod, *h.collapse.cod);
  EXPECT_TRUE(check_morphism(back));
  json bad = morphism_to_json(h.collapse);
  bad["map"].erase(bad["map"].begin());
  EXPECT_EQ(code_of([&] { morphism_from_json(h.order, bad); }), ErrorCode::BadConfig);
}

TEST(MatrixJson, RoundTrip) {
  std::mt19937_64 rng(1);
  CMatrix u = oracle::random_unitary(4, rng);
  EXPECT_EQ(cmatrix_from_json(matrix_to_json(u)), u);
  RMatrix r = RMatrix::Random(3, 2);
  EXPECT_EQ(rmatrix_from_json(matrix_to_json(r)), r);
  EXPECT_EQ(code_of([&] { rmatrix_from_json(matrix_to_json(u)); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] { cmatrix_from_json(json{{"shape", {2, 2}}, {"data", {{1, 0}}}}); }), ErrorCode::BadConfig);
  EXPECT_EQ(cmatrix_from_json(json{{"shape", {1, 2}}, {"data", {{1, 0}, {0, -1}}}})(0, 1), Complex(0.0, -1.0));
}

TEST(StateJson, RoundTrip) {
  std::mt19937_64 rng(2);
  ProcObject obj(Backend::Quantum, {2, 3});
  ProcState rho(obj, oracle::random_density(6, rng));
  ProcState back = state_from_json(state_to_json(rho));
  EXPECT_EQ(back.object(), obj);
  EXPECT_EQ(back.density(), rho.density());

  ProcObject cobj(Backend::Classical, {2, 2});
  RVector p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  ProcState cs(cobj, p);
  ProcState cback = state_from_json(state_to_json(cs));
  EXPECT_EQ(cback.backend(), Backend::Classical);
  EXPECT_EQ(cback.probabilities(), p);

  ProcState pure = state_from_json(json{{"factors", {2}}, {"vector", {{0, 0}, {1, 0}}}});
  EXPECT_EQ(pure.density()(1, 1), Complex(1.0, 0.0));
  EXPECT_EQ(pure.density()(0, 0), Complex(0.0, 0.0));
}

TEST(ConfigJson, RoundTripAndExtensions) {
  PartitionedCCAConfig d = cca_config_from_json(json{{"dirac", {{"m", 0.5}, {"eps", 0.2}}}});
  EXPECT_EQ(std::get<CMatrix>(d.U), std::get<CMatrix>(dirac_config(0.5, 0.2).U));
  ASSERT_TRUE(d.U_inv.has_value());
  PartitionedCCAConfig again = cca_config_from_json(cca_config_to_json(d));
  EXPECT_EQ(std::get<CMatrix>(again.U), std::get<CMatrix>(d.U));
  EXPECT_EQ(again.d, 1);
  EXPECT_EQ(again.backend, Backend::Quantum);

  json classical = {{"d", 1}, {"cell_dim", 2}, {"backend", "classical"},
                    {"U", matrix_to_json(RMatrix(RMatrix::Identity(4, 4)))}};
  PartitionedCCAConfig c = cca_config_from_json(classical);
  EXPECT_EQ(c.backend, Backend::Classical);
  EXPECT_TRUE(std::holds_alternative<RMatrix>(c.U));

  json over = cca_config_to_json(dirac_config(0.5, 0.2));
  over["overrides"] = json::array({json{{"event", "1,1"}, {"U", matrix_to_json(factor_swap(2))}}});
  PartitionedCCAConfig inh = cca_config_from_json(over);
  ASSERT_EQ(inh.overrides.size(), 1U);
  EXPECT_EQ(inh.overrides.begin()->first, (LatticeEvent{1, {1}}));

  EXPECT_EQ(code_of([] { cca_config_from_json(json{{"d", 1}}); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([] {
              cca_config_from_json(json{{"U", matrix_to_json(CMatrix(CMatrix::Identity(3, 3)))}});
            }),
            ErrorCode::BadConfig);
}

TEST(ShippedConfigs, Load) {
  const std::filesystem::path dir = std::filesystem::path(CFT_SOURCE_DIR) / "configs";
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    EXPECT_NO_THROW(validate_config(cca_config_from_json(read_json_file(entry.path().string()))))
        << entry.path();
    ++n;
  }
  EXPECT_GE(n, 5U);
}

TEST(Dot, EdgeCounts) {
  const std::string dot = to_dot(*chain3());
  EXPECT_EQ(count_edges(dot), 2U);
  EXPECT_NE(dot.find("\"a\" -> \"b\""), std::string::npos);
  Honeycomb h = honeycomb(DiamondLattice(1), Window{0, 2, -3, 3});
  EXPECT_EQ(count_edges(to_dot(*h.order)), h.order->hasse().size());
  FiniteOrder o = random_order(9, 0.4, 3);
  EXPECT_EQ(count_edges(to_dot(o)), o.hasse().size());
}

TEST(Csv, HeaderAndRows) {
  const std::string csv = marginals_csv({{0, 0, 0.5}, {0, 2, 0.5}, {1, 1, 1.0}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,site,probability");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("1,1,1\n"), std::string::npos);
}

TEST(Files, ReadAndWrite) {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / "cft_io_test.json";
  write_text_file(p.string(), order_to_json(*chain3()).dump());
  EXPECT_EQ(order_from_json(read_json_file(p.string())), *chain3());
  std::filesystem::remove(p);
  EXPECT_EQ(code_of([&] { read_json_file(p.string()); }), ErrorCode::IOError);
  write_text_file(p.string(), "{not json");
  EXPECT_EQ(code_of([&] { read_json_file(p.string()); }), ErrorCode::BadConfig);
  std::filesystem::remove(p);
}
