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

// causal-fields: command-line front end.
//
//   gen     diamond | honeycomb | file | random
//   query   future | past | dplus | dminus | diamond | paths | slices | cauchy
//   check   functoriality | monoidality | nosignalling | reversal | symmetry |
//           invariance | foliation | category
//   run     evolve a CCA leaf by leaf
//   export  dot | csv
//
// Exit status: 0 on success, 1 when a check finds violations, 2 on usage or
// configuration errors.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cft/cca.hpp"
#include "cft/error.hpp"
#include "cft/field_theory.hpp"
#include "cft/generators.hpp"
#include "cft/io.hpp"
#include "cft/lattice.hpp"
#include "cft/order.hpp"
#include "cft/slices.hpp"

using namespace cft;

namespace {

constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kUsage = 2;

struct Options {
  std::uint64_t seed = 1;
  double tol = kValidityTol;
  std::string out;

  // inputs
  std::string in;
  std::string order;
  std::string cca;
  std::string run;
  std::string leaves;
  std::string perms;
  std::string state;
  std::string csv;

  // lattice windows
  int d = 1;
  int period = 0;
  std::string t = "0..3";
  std::string x = "-4..4";
  std::size_t max_slice = 3;

  // generators
  std::size_t n = 8;
  double p = 0.3;

  // queries
  std::string events;
  std::string from;
  std::string to;
  bool maximal = false;

  // checks
  std::size_t samples = 0;
  std::size_t zigzag = 2;
  std::size_t words = 3;
  bool exact = false;
  bool unchecked_inverse = false;

  // runs
  std::size_t steps = 0;
  std::optional<double> m;
  std::optional<double> eps;
  std::string init = "gaussian";
  std::optional<double> center;
  std::optional<double> width;
  double k = 0.0;
  double left = 0.0;
};

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      std::size_t used = 0;
      const int a = std::stoi(text.substr(0, dots), &used);
      if (used != dots) throw std::invalid_argument(text);
      const std::string rest = text.substr(dots + 2);
      const int b = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(text);
      return {a, b};
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::BadParams, "expected a range a..b, got \"" + text + "\"");
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ';') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Event lists are separated by ';' since lattice event names contain commas;
// a JSON list is accepted as well.
std::vector<std::string> event_list(const std::string& text) {
  if (!text.empty() && text.front() == '[') return json::parse(text).get<std::vector<std::string>>();
  return split_names(text);
}

json inline_or_file(const std::string& text) {
  if (!text.empty() && (text.front() == '[' || text.front() == '{')) {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::BadConfig, e.what());
    }
  }
  return read_json_file(text);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
}

void emit_json(const Options& o, const json& j) { emit(o, j.dump(2) + "\n"); }

std::vector<std::string> sorted_names(const FiniteOrder& order, const EventSet& s) {
  auto names = order.names_of(s);
  std::sort(names.begin(), names.end());
  return names;
}

LoadedOrder require_order(const Options& o) {
  if (o.order.empty()) throw Error(ErrorCode::BadParams, "--order is required");
  return load_order(read_json_file(o.order));
}

std::shared_ptr<const LatticeWindow> window_from(const Options& o, const json& config) {
  int d = o.d;
  if (config.contains("d")) d = config.at("d").get<int>();
  if (config.contains("dirac")) d = 1;
  const int period = o.period > 0 ? o.period : config.value("period", 0);
  const auto [t0, t1] = parse_range(o.t);
  Window w{t0, t1, 0, period > 0 ? period - 1 : 0};
  if (period == 0) std::tie(w.lo, w.hi) = parse_range(o.x);
  return std::make_shared<const LatticeWindow>(DiamondLattice(d, period), w);
}

template <class T>
std::vector<T> subsample(std::vector<T> all, std::size_t count, std::uint64_t seed) {
  if (count == 0 || all.size() <= count) return all;
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  return all;
}

int finish(const Options& o, const Report& r) {
  emit_json(o, r.to_json());
  return r.passed() ? kOk : kViolations;
}

// -- gen --------------------------------------------------------------------

int cmd_gen(const Options& o, const std::string& kind) {
  if (kind == "diamond") {
    const auto [t0, t1] = parse_range(o.t);
    Window w{t0, t1, 0, o.period > 0 ? o.period - 1 : 0};
    if (o.period == 0) std::tie(w.lo, w.hi) = parse_range(o.x);
    LatticeWindow window(DiamondLattice(o.d, o.period), w);
    emit_json(o, order_to_json(window.order()));
  } else if (kind == "honeycomb") {
    const auto [t0, t1] = parse_range(o.t);
    Window w{t0, t1, 0, o.period > 0 ? o.period - 1 : 0};
    if (o.period == 0) std::tie(w.lo, w.hi) = parse_range(o.x);
    Honeycomb h = honeycomb(DiamondLattice(1, o.period), w);
    json j = order_to_json(*h.order);
    j["collapse"] = morphism_to_json(h.collapse);
    emit_json(o, j);
  } else if (kind == "file") {
    if (o.in.empty()) throw Error(ErrorCode::BadParams, "--in is required");
    LoadedOrder loaded = load_order(read_json_file(o.in));
    json j = order_to_json(*loaded.order);
    if (loaded.collapse) {
      if (!check_morphism(*loaded.collapse)) throw Error(ErrorCode::InvalidMorphism, "stored collapse is not a morphism");
      j["collapse"] = morphism_to_json(*loaded.collapse);
    }
    emit_json(o, j);
  } else if (kind == "random") {
    emit_json(o, order_to_json(random_order(o.n, o.p, o.seed)));
  } else {
    throw Error(ErrorCode::BadParams, "unknown generator " + kind);
  }
  return kOk;
}

// -- query ------------------------------------------------------------------

int cmd_query(const Options& o, const std::string& what) {
  LoadedOrder loaded = require_order(o);
  const FiniteOrder& order = *loaded.order;
  auto events = [&] { return order.set_of(event_list(o.events)); };
  auto endpoint = [&](const std::string& name, const char* flag) {
    if (name.empty()) throw Error(ErrorCode::BadParams, std::string(flag) + " is required");
    return order.id(name);
  };
  json out;
  if (what == "future") {
    out = {{"events", sorted_names(order, future(order, events()))}};
  } else if (what == "past") {
    out = {{"events", sorted_names(order, past(order, events()))}};
  } else if (what == "dplus") {
    EventSet a = events();
    out = {{"events", sorted_names(order, loaded.window ? lattice_future_domain(*loaded.window, a)
                                                        : future_domain(order, a))}};
  } else if (what == "dminus") {
    EventSet a = events();
    out = {{"events", sorted_names(order, loaded.window ? lattice_past_domain(*loaded.window, a)
                                                        : past_domain(order, a))}};
  } else if (what == "diamond") {
    out = {{"events", sorted_names(order, diamond(order, endpoint(o.from, "--from"), endpoint(o.to, "--to")))}};
  } else if (what == "paths") {
    json paths = json::array();
    for_each_causal_path(order, endpoint(o.from, "--from"), endpoint(o.to, "--to"),
                         [&](const std::vector<EventId>& path) {
                           json p = json::array();
                           for (EventId e : path) p.push_back(order.name(e));
                           paths.push_back(p);
                         });
    out = {{"paths", paths}};
  } else if (what == "slices") {
    json list = json::array();
    for (const EventSet& s : o.maximal ? maximal_slices(order) : enumerate_slices(order)) {
      list.push_back(sorted_names(order, s));
    }
    out = {{"slices", list}};
  } else if (what == "cauchy") {
    EventSet a = events();
    const bool c = loaded.window ? is_cauchy(*loaded.window, a) : is_cauchy(order, a);
    out = {{"cauchy", c}};
  } else {
    throw Error(ErrorCode::BadParams, "unknown query " + what);
  }
  emit_json(o, out);
  return kOk;
}

// -- check ------------------------------------------------------------------

struct Theory {
  json config_json;
  PartitionedCCAConfig config;
  std::shared_ptr<const LatticeWindow> window;
  std::shared_ptr<const FieldTheory> psi;
};

Theory load_theory(const Options& o) {
  if (o.cca.empty()) throw Error(ErrorCode::BadParams, "--cca is required");
  Theory th;
  th.config_json = read_json_file(o.cca);
  th.config = cca_config_from_json(th.config_json);
  th.window = window_from(o, th.config_json);
  CCAWindowOptions opts;
  opts.max_slice_size = th.window->lattice().periodic() ? SIZE_MAX : o.max_slice;
  th.psi = build_cca(th.config, th.window, opts);
  return th;
}

CCAWindowOptions window_options(const Options& o, const LatticeWindow& w) {
  CCAWindowOptions opts;
  opts.max_slice_size = w.lattice().periodic() ? SIZE_MAX : o.max_slice;
  return opts;
}

int cmd_check(const Options& o, const std::string& target) {
  if (target == "foliation") {
    LoadedOrder loaded = require_order(o);
    if (o.leaves.empty()) throw Error(ErrorCode::BadParams, "--leaves is required");
    return finish(o, validate_foliation(*loaded.order, foliation_from_json(*loaded.order, inline_or_file(o.leaves))));
  }
  if (target == "category") {
    ValidationOptions vo;
    vo.seed = o.seed;
    if (!o.cca.empty()) return finish(o, validate_slice_category(load_theory(o).psi->category(), vo));
    LoadedOrder loaded = require_order(o);
    return finish(o, validate_slice_category(SliceCategory::all_slices(loaded.order), vo));
  }
  if (target == "symmetry" && o.cca.empty()) {
    LoadedOrder loaded = require_order(o);
    if (o.perms.empty()) throw Error(ErrorCode::BadParams, "--perms is required with --order");
    const json perms = inline_or_file(o.perms);
    std::vector<std::vector<EventId>> gens;
    for (const json& g : perms) {
      std::vector<EventId> p(loaded.order->size());
      for (EventId x = 0; x < p.size(); ++x) {
        const std::string& name = loaded.order->name(x);
        p[x] = g.contains(name) ? loaded.order->id(g.at(name).get<std::string>()) : x;
      }
      gens.push_back(std::move(p));
    }
    SymmetryCheckOptions so;
    so.seed = o.seed;
    if (o.samples > 0) so.samples = o.samples;
    auto c = SliceCategory::all_slices(loaded.order);
    return finish(o, check_symmetry_action(permutation_action(loaded.order, gens), c, so));
  }

  Theory th = load_theory(o);
  const SliceCategory& c = th.psi->category();
  if (target == "functoriality") {
    return finish(o, check_functoriality(*th.psi, subsample(composable_triples(c), o.samples, o.seed), o.tol));
  }
  if (target == "monoidality") {
    return finish(o, check_monoidality(*th.psi, separated_quadruples(c, o.samples ? o.samples : 100, o.seed), o.tol));
  }
  if (target == "nosignalling") {
    std::vector<std::pair<EventSet, EventSet>> products;
    for (const Quadruple& q : separated_quadruples(c, o.samples ? o.samples : 100, o.seed)) {
      products.emplace_back(q.sigma, q.gamma);
    }
    return finish(o, check_environment(*th.psi, subsample(all_morphisms(c), o.samples, o.seed), products, o.tol));
  }
  if (target == "reversal") {
    std::shared_ptr<const FieldTheory> phi;
    try {
      phi = o.unchecked_inverse ? build_reverse_theory(th.config, th.window, window_options(o, *th.window))
                                : build_reversal(th.config, th.window, window_options(o, *th.window));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotInvertible) throw;
      Report r("reversal");
      r.require(false, {{"law", "invertibility"}, {"reason", e.what()}});
      return finish(o, r);
    }
    auto pairs = sample_zigzag_pairs(*th.psi, *phi, o.zigzag, o.samples ? o.samples : 100, o.seed);
    return finish(o, check_reversal(*th.psi, *phi, pairs, o.tol));
  }
  if (target == "symmetry") {
    SymmetryCheckOptions so;
    so.seed = o.seed;
    if (o.samples > 0) so.samples = o.samples;
    if (th.window->lattice().periodic()) so.foliation = row_foliation(*th.window);
    return finish(o, check_symmetry_action(lattice_translations(*th.window), c, so));
  }
  if (target == "invariance") {
    InvarianceOptions io;
    io.max_word = o.words;
    io.samples = o.samples;
    io.seed = o.seed;
    io.tol = o.tol;
    io.exact = o.exact;
    return finish(o, check_invariance(*th.psi, lattice_translations(*th.window), identity_invariance(*th.psi), io));
  }
  throw Error(ErrorCode::BadParams, "unknown check " + target);
}

// -- run --------------------------------------------------------------------

json amplitudes(const std::vector<Complex>& v, const std::vector<int>& sites) {
  json out = json::array();
  for (int x : sites) out.push_back({v[static_cast<std::size_t>(x)].real(), v[static_cast<std::size_t>(x)].imag()});
  return out;
}

json marginal_list(const std::vector<std::pair<int, double>>& m) {
  json out = json::array();
  for (const auto& [site, p] : m) out.push_back({{"site", site}, {"probability", p}});
  return out;
}

// Probability that the factors of the j-th event are not all in state 0.
std::vector<double> occupation(const ProcState& rho, std::size_t events, std::size_t per_event) {
  std::vector<double> out(events, 0.0);
  const auto& factors = rho.object().factors();
  const std::size_t dim = rho.object().dim();
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const double w = rho.backend() == Backend::Quantum
                         ? rho.density()(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)).real()
                         : rho.probabilities()(static_cast<Eigen::Index>(idx));
    std::size_t rest = idx;
    std::vector<bool> busy(events, false);
    for (std::size_t f = factors.size(); f-- > 0;) {
      if (rest % factors[f] != 0) busy[f / per_event] = true;
      rest /= factors[f];
    }
    for (std::size_t e = 0; e < events; ++e) {
      if (busy[e]) out[e] += w;
    }
  }
  return out;
}

int cmd_run(const Options& o) {
  if (o.cca.empty()) throw Error(ErrorCode::BadParams, "--cca is required");
  json cj = read_json_file(o.cca);
  if (o.m || o.eps) {
    if (!cj.contains("dirac")) throw Error(ErrorCode::BadParams, "--m and --eps need a Dirac config");
    if (o.m) cj["dirac"]["m"] = *o.m;
    if (o.eps) cj["dirac"]["eps"] = *o.eps;
  }
  const PartitionedCCAConfig config = cca_config_from_json(cj);
  const int period = o.period > 0 ? o.period : cj.value("period", 64);
  json steps = json::array();
  std::vector<MarginalRow> rows;
  double drift = 0.0;
  double initial_norm = 0.0;

  if (o.state.empty()) {
    SingleParticleWalk walk(config, period);
    const double c = o.center.value_or(period / 2.0);
    const double w = o.width.value_or(period / 16.0);
    std::vector<Complex> r(static_cast<std::size_t>(period)), l(static_cast<std::size_t>(period));
    if (o.init == "point") {
      int site = static_cast<int>(std::lround(c));
      site -= site % 2;
      r[static_cast<std::size_t>(((site % period) + period) % period)] = 1.0;
    } else if (o.init == "gaussian") {
      auto f = [&](double y) {
        return std::exp(-(y - c) * (y - c) / (2 * w * w)) * std::exp(Complex(0.0, o.k * y));
      };
      double norm = 0.0;
      for (int x : walk.sites()) {
        r[static_cast<std::size_t>(x)] = f(x - 0.5);
        l[static_cast<std::size_t>(x)] = o.left * f(x + 0.5);
        norm += std::norm(r[static_cast<std::size_t>(x)]) + std::norm(l[static_cast<std::size_t>(x)]);
      }
      for (auto& v : r) v /= std::sqrt(norm);
      for (auto& v : l) v /= std::sqrt(norm);
    } else {
      throw Error(ErrorCode::BadParams, "--init is point or gaussian");
    }
    walk.set(r, l);
    initial_norm = walk.norm();
    for (std::size_t s = 0;; ++s) {
      std::vector<std::pair<int, double>> m;
      const auto marg = walk.marginals();
      const auto sites = walk.sites();
      json slice = json::array();
      for (int x : sites) {
        m.emplace_back(x, marg[static_cast<std::size_t>(x)]);
        rows.push_back({walk.time(), x, marg[static_cast<std::size_t>(x)]});
        slice.push_back(to_string(LatticeEvent{walk.time(), {x}}));
      }
      drift = std::max(drift, std::abs(walk.norm() - initial_norm));
      steps.push_back({{"t", walk.time()},
                       {"slice", {{"events", slice}}},
                       {"norm", walk.norm()},
                       {"marginals", marginal_list(m)},
                       {"state", {{"right", amplitudes(walk.right(), sites)}, {"left", amplitudes(walk.left(), sites)}}}});
      if (s == o.steps) break;
      walk.step();
    }
  } else {
    const int rows_needed = static_cast<int>(o.steps);
    auto window = std::make_shared<const LatticeWindow>(DiamondLattice(config.d, period),
                                                        Window{0, rows_needed, 0, period - 1});
    auto psi = build_cca(config, window);
    ProcState rho = state_from_json(read_json_file(o.state));
    const std::size_t per_event = std::size_t{1} << config.d;
    if (!(rho.object() == psi->object(window->row(0)))) {
      throw Error(ErrorCode::ShapeMismatch, "initial state does not live on the first row");
    }
    initial_norm = rho.trace();
    for (int t = 0;; ++t) {
      const EventSet row = window->row(t);
      const auto ids = members(row);
      const auto occ = occupation(rho, ids.size(), per_event);
      std::vector<std::pair<int, double>> m;
      json slice = json::array();
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const LatticeEvent& e = window->event(ids[j]);
        const int site = e.x.empty() ? 0 : e.x[0];
        m.emplace_back(site, occ[j]);
        rows.push_back({t, site, occ[j]});
        slice.push_back(to_string(e));
      }
      drift = std::max(drift, std::abs(rho.trace() - initial_norm));
      steps.push_back({{"t", t}, {"slice", {{"events", slice}}}, {"norm", rho.trace()},
                       {"marginals", marginal_list(m)}, {"state", state_to_json(rho)}});
      if (t == rows_needed) break;
      rho = apply(psi->morphism(row, window->row(t + 1)), rho);
    }
  }
  json out = {{"config", cj}, {"period", period}, {"steps", steps}, {"max_norm_drift", drift}};
  if (!o.csv.empty()) write_text_file(o.csv, marginals_csv(rows));
  emit_json(o, out);
  return kOk;
}

// -- export -----------------------------------------------------------------

int cmd_export(const Options& o, const std::string& format) {
  if (format == "dot") {
    emit(o, to_dot(*require_order(o).order));
    return kOk;
  }
  if (format == "csv") {
    if (o.run.empty()) throw Error(ErrorCode::BadParams, "--run is required");
    const json run = read_json_file(o.run);
    std::vector<MarginalRow> rows;
    for (const json& step : run.at("steps")) {
      for (const json& m : step.at("marginals")) {
        rows.push_back({step.at("t").get<int>(), m.at("site").get<int>(), m.at("probability").get<double>()});
      }
    }
    emit(o, marginals_csv(rows));
    return kOk;
  }
  throw Error(ErrorCode::BadParams, "unknown export format " + format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal orders, slice categories and causal field theories."};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Seed for every sampled check");
  app.add_option("--tol", o.tol, "Tolerance for numerical comparisons");
  app.add_option("--out", o.out, "Write the result here instead of stdout");

  auto add_window = [&](CLI::App* cmd) {
    cmd->add_option("--d", o.d, "Spatial dimension");
    cmd->add_option("--period", o.period, "Ring period (0 for the plane)");
    cmd->add_option("--t", o.t, "Time window a..b");
    cmd->add_option("--x", o.x, "Coordinate box lo..hi");
  };

  std::string gen_kind;
  auto* gen = app.add_subcommand("gen", "Generate a causal order");
  gen->add_option("kind", gen_kind, "diamond | honeycomb | file | random")->required();
  add_window(gen);
  gen->add_option("--in", o.in, "Order file to validate");
  gen->add_option("--n", o.n, "Events of a random order");
  gen->add_option("--p", o.p, "Edge probability of a random order");

  std::string query_what;
  auto* query = app.add_subcommand("query", "Query an order");
  query->add_option("what", query_what, "future | past | dplus | dminus | diamond | paths | slices | cauchy")
      ->required();
  query->add_option("--order", o.order, "Order file");
  query->add_option("--events", o.events, "Events separated by ';' or a JSON list");
  query->add_option("--from", o.from, "Lower endpoint");
  query->add_option("--to", o.to, "Upper endpoint");
  query->add_flag("--maximal", o.maximal, "Only maximal slices");

  std::string check_target;
  auto* check = app.add_subcommand("check", "Run a law-check suite");
  check->add_option("target", check_target,
                    "functoriality | monoidality | nosignalling | reversal | symmetry | invariance | "
                    "foliation | category")
      ->required();
  check->add_option("--cca", o.cca, "CCA config file");
  check->add_option("--order", o.order, "Order file");
  check->add_option("--leaves", o.leaves, "Foliation leaves, inline JSON or file");
  check->add_option("--perms", o.perms, "Generators as event maps, inline JSON or file");
  check->add_option("--max-slice", o.max_slice, "Largest slice on a plane window");
  check->add_option("--samples", o.samples, "Number of samples (0: every case where exhaustive)");
  check->add_option("--zigzag", o.zigzag, "Most reversals per chain");
  check->add_option("--words", o.words, "Longest group word");
  check->add_flag("--exact", o.exact, "Require structurally equal kernels");
  check->add_flag("--unchecked-inverse", o.unchecked_inverse, "Use U_inv from the config as given");
  add_window(check);

  auto* run = app.add_subcommand("run", "Evolve a CCA");
  run->add_option("--cca", o.cca, "CCA config file");
  run->add_option("--steps", o.steps, "Number of steps");
  run->add_option("--period", o.period, "Ring period");
  run->add_option("--m", o.m, "Mass of a Dirac config");
  run->add_option("--eps", o.eps, "Lattice spacing of a Dirac config");
  run->add_option("--init", o.init, "point | gaussian (one-particle runs)");
  run->add_option("--center", o.center, "Initial position");
  run->add_option("--width", o.width, "Initial width");
  run->add_option("--k", o.k, "Initial wavenumber");
  run->add_option("--left", o.left, "Left-moving amplitude relative to the right-moving one");
  run->add_option("--state", o.state, "Initial density state on the first row");
  run->add_option("--csv", o.csv, "Also write single-site marginals as CSV");

  std::string export_format;
  auto* exp = app.add_subcommand("export", "Export an order or a run");
  exp->add_option("format", export_format, "dot | csv")->required();
  exp->add_option("--order", o.order, "Order file");
  exp->add_option("--run", o.run, "Run file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, gen_kind);
    if (query->parsed()) return cmd_query(o, query_what);
    if (check->parsed()) return cmd_check(o, check_target);
    if (run->parsed()) return cmd_run(o);
    if (exp->parsed()) return cmd_export(o, export_format);
  } catch (const Error& e) {
    std::cerr << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "BadConfig"}, {"message", e.what()}}.dump() << "\n";
    return kUsage;
  }
  return kUsage;
}
