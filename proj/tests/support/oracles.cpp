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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

namespace {

bool covers(const FiniteOrder& order, EventId x, EventId y) {
  if (!order.less(x, y)) return false;
  for (EventId z = 0; z < order.size(); ++z) {
    if (order.less(x, z) && order.less(z, y)) return false;
  }
  return true;
}

void down_chains(const FiniteOrder& order, std::vector<EventId>& path,
                 std::vector<std::vector<EventId>>& out) {
  const EventId x = path.back();
  bool extended = false;
  for (EventId z = 0; z < order.size(); ++z) {
    if (!covers(order, z, x)) continue;
    extended = true;
    path.push_back(z);
    down_chains(order, path, out);
    path.pop_back();
  }
  if (!extended) out.emplace_back(path.rbegin(), path.rend());
}

void up_chains(const FiniteOrder& order, std::vector<EventId>& path,
               std::vector<std::vector<EventId>>& out) {
  const EventId x = path.back();
  bool extended = false;
  for (EventId z = 0; z < order.size(); ++z) {
    if (!covers(order, x, z)) continue;
    extended = true;
    path.push_back(z);
    up_chains(order, path, out);
    path.pop_back();
  }
  if (!extended) out.push_back(path);
}

bool meets(const std::vector<EventId>& chain, const EventSet& a) {
  return std::any_of(chain.begin(), chain.end(), [&](EventId e) { return a.test(e); });
}

std::size_t total(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (std::size_t d : dims) n *= d;
  return n;
}

std::vector<std::size_t> digits(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t f = dims.size(); f-- > 0;) {
    out[f] = index % dims[f];
    index /= dims[f];
  }
  return out;
}

std::size_t number(const std::vector<std::size_t>& dig, const std::vector<std::size_t>& dims) {
  std::size_t index = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) index = index * dims[f] + dig[f];
  return index;
}

}  // namespace

std::vector<std::vector<EventId>> chains_into(const FiniteOrder& order, EventId x) {
  std::vector<std::vector<EventId>> out;
  std::vector<EventId> path{x};
  down_chains(order, path, out);
  return out;
}

std::vector<std::vector<EventId>> chains_out_of(const FiniteOrder& order, EventId x) {
  std::vector<std::vector<EventId>> out;
  std::vector<EventId> path{x};
  up_chains(order, path, out);
  return out;
}

std::vector<std::vector<EventId>> maximal_chains(const FiniteOrder& order) {
  std::vector<std::vector<EventId>> out;
  for (EventId x = 0; x < order.size(); ++x) {
    bool minimal = true;
    for (EventId z = 0; z < order.size(); ++z) minimal = minimal && !order.less(z, x);
    if (!minimal) continue;
    for (auto& c : chains_out_of(order, x)) out.push_back(std::move(c));
  }
  return out;
}

EventSet future_domain(const FiniteOrder& order, const EventSet& a) {
  EventSet out(order.size());
  for (EventId x = 0; x < order.size(); ++x) {
    const auto chains = chains_into(order, x);
    out[x] = std::all_of(chains.begin(), chains.end(), [&](const auto& c) { return meets(c, a); });
  }
  return out;
}

EventSet past_domain(const FiniteOrder& order, const EventSet& a) {
  EventSet out(order.size());
  for (EventId x = 0; x < order.size(); ++x) {
    const auto chains = chains_out_of(order, x);
    out[x] = std::all_of(chains.begin(), chains.end(), [&](const auto& c) { return meets(c, a); });
  }
  return out;
}

bool is_cauchy(const FiniteOrder& order, const EventSet& sigma) {
  for (EventId x : cft::members(sigma)) {
    for (EventId y : cft::members(sigma)) {
      if (order.less(x, y)) return false;
    }
  }
  const auto chains = maximal_chains(order);
  return std::all_of(chains.begin(), chains.end(), [&](const auto& c) { return meets(c, sigma); });
}

FiniteOrder random_dag(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p);
  std::vector<FiniteOrder::Edge> edges;
  for (EventId i = 0; i < n; ++i) {
    for (EventId j = i + 1; j < n; ++j) {
      if (edge(rng)) edges.emplace_back(i, j);
    }
  }
  return FiniteOrder::from_edges(n, edges);
}

std::vector<EventSet> all_subsets(std::size_t n) {
  std::vector<EventSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    EventSet s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1U;
    out.push_back(s);
  }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix embed(const CMatrix& op, const std::vector<std::size_t>& dims,
              const std::vector<std::size_t>& factors) {
  std::vector<std::size_t> sub;
  for (std::size_t f : factors) sub.push_back(dims[f]);
  const std::size_t n = total(dims);
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t col = 0; col < n; ++col) {
    const auto in = digits(col, dims);
    std::vector<std::size_t> in_sub;
    for (std::size_t f : factors) in_sub.push_back(in[f]);
    const std::size_t c = number(in_sub, sub);
    for (std::size_t r = 0; r < total(sub); ++r) {
      auto outd = in;
      const auto rd = digits(r, sub);
      for (std::size_t i = 0; i < factors.size(); ++i) outd[factors[i]] = rd[i];
      out(static_cast<Eigen::Index>(number(outd, dims)), static_cast<Eigen::Index>(col)) +=
          op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

CMatrix partial_trace(const CMatrix& rho, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& traced) {
  std::vector<std::size_t> kept_dims;
  for (std::size_t f = 0; f < dims.size(); ++f) {
    if (std::find(traced.begin(), traced.end(), f) == traced.end()) kept_dims.push_back(dims[f]);
  }
  const std::size_t n = total(dims);
  const auto m = static_cast<Eigen::Index>(total(kept_dims));
  CMatrix out = CMatrix::Zero(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto di = digits(i, dims);
    for (std::size_t j = 0; j < n; ++j) {
      const auto dj = digits(j, dims);
      bool diagonal = true;
      std::vector<std::size_t> ki, kj;
      for (std::size_t f = 0; f < dims.size(); ++f) {
        if (std::find(traced.begin(), traced.end(), f) != traced.end()) {
          diagonal = diagonal && di[f] == dj[f];
        } else {
          ki.push_back(di[f]);
          kj.push_back(dj[f]);
        }
      }
      if (!diagonal) continue;
      out(static_cast<Eigen::Index>(number(ki, kept_dims)), static_cast<Eigen::Index>(number(kj, kept_dims))) +=
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

CMatrix permute(const CMatrix& rho, const std::vector<std::size_t>& dims,
                const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> out_dims;
  for (std::size_t p : perm) out_dims.push_back(dims[p]);
  const std::size_t n = total(dims);
  CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t col = 0; col < n; ++col) {
    const auto in = digits(col, dims);
    std::vector<std::size_t> outd;
    for (std::size_t q : perm) outd.push_back(in[q]);
    p(static_cast<Eigen::Index>(number(outd, out_dims)), static_cast<Eigen::Index>(col)) = 1.0;
  }
  return p * rho * p.adjoint();
}

CMatrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

CMatrix random_density(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

Spinor dirac_finite_difference(double m, double eps, const Spinor& initial, int steps) {
  using Eigen::Matrix2cd;
  const Complex i(0.0, 1.0);
  const double mu = m * eps;
  Matrix2cd x;
  x << 0, 1, 1, 0;
  const Matrix2cd coin = (Matrix2cd::Identity() + i * mu / 2.0 * x)
                             .inverse() * (Matrix2cd::Identity() - i * mu / 2.0 * x);
  Spinor s = initial;
  const int p = static_cast<int>(s.right.size());
  for (int n = 0; n < steps; ++n) {
    Spinor next{std::vector<Complex>(s.right.size()), std::vector<Complex>(s.left.size())};
    for (int site = 0; site < p; ++site) {
      const Complex r = s.right[static_cast<std::size_t>(site)];
      const Complex l = s.left[static_cast<std::size_t>(site)];
      next.right[static_cast<std::size_t>((site + 1) % p)] = coin(0, 0) * r + coin(0, 1) * l;
      next.left[static_cast<std::size_t>((site - 1 + p) % p)] = coin(1, 0) * r + coin(1, 1) * l;
    }
    s = std::move(next);
  }
  return s;
}

Spinor dirac_fourier(double m, double eps, const std::function<Complex(double)>& right0,
                     const std::function<Complex(double)>& left0, int period, double time) {
  const std::size_t n = 2 * static_cast<std::size_t>(period);
  const double pi = std::numbers::pi;
  const Complex i(0.0, 1.0);
  std::vector<Complex> rk(n), lk(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex w = std::exp(-2.0 * pi * i * static_cast<double>(k * j % n) / static_cast<double>(n));
      rk[k] += right0(0.5 * static_cast<double>(j)) * w;
      lk[k] += left0(0.5 * static_cast<double>(j)) * w;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto signed_k = static_cast<double>(k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n));
    const double wave = 2.0 * pi * signed_k / (static_cast<double>(n) * 0.5 * eps);
    const double e = std::sqrt(wave * wave + m * m);
    const double c = std::cos(e * time);
    const double s = e > 0 ? std::sin(e * time) / e : time;
    const Complex r = rk[k], l = lk[k];
    rk[k] = c * r - i * s * (wave * r + m * l);
    lk[k] = c * l - i * s * (m * r - wave * l);
  }
  Spinor out{std::vector<Complex>(n), std::vector<Complex>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex w = std::exp(2.0 * pi * i * static_cast<double>(k * j % n) / static_cast<double>(n));
      out.right[j] += rk[k] * w / static_cast<double>(n);
      out.left[j] += lk[k] * w / static_cast<double>(n);
    }
  }
  return out;
}

}  // namespace oracle
