// Copyright 2026 The critiq Authors
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

#include "critiq/critique/blend_gate.hpp"

#include <cmath>

#include "critiq/error.hpp"

namespace critiq {
namespace {

const char* kGateNames[] = {"w_ir", "w_iu", "w_in", "w_hr", "w_hu",
                            "w_hn", "b_r",  "b_u",  "b_n"};

// acc[j] += sum_i x[i] * w(i, j)
template <typename T>
void add_vec_mat(std::span<const T> x, const Matrix<T>& w, std::vector<double>& acc) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const auto row = w.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) acc[j] += xi * row[j];
  }
}

// dx[i] += sum_j d[j] * w(i, j)
template <typename T>
void add_mat_vec(const Matrix<T>& w, std::span<const double> d, std::vector<double>& dx) {
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const auto row = w.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * d[j];
    dx[i] += s;
  }
}

// g(i, j) += x[i] * d[j]
template <typename T>
void add_outer(std::span<const T> x, std::span<const double> d, Matrix<T>& g) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    auto row = g.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += static_cast<T>(xi * d[j]);
  }
}

template <typename T>
void add_bias(std::span<const double> d, Matrix<T>& g) {
  auto row = g.row(0);
  for (std::size_t j = 0; j < row.size(); ++j) row[j] += static_cast<T>(d[j]);
}

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

template <typename T>
GateStep<T> step(const BlendGate<T>& g, std::span<const T> x, std::vector<T> h) {
  const std::size_t d = g.dim();
  std::vector<double> ar(g.b_r.values().begin(), g.b_r.values().end());
  std::vector<double> au(g.b_u.values().begin(), g.b_u.values().end());
  std::vector<double> an(g.b_n.values().begin(), g.b_n.values().end());
  add_vec_mat<T>(x, g.w_ir, ar);
  add_vec_mat<T>(h, g.w_hr, ar);
  add_vec_mat<T>(x, g.w_iu, au);
  add_vec_mat<T>(h, g.w_hu, au);

  GateStep<T> s;
  s.x.assign(x.begin(), x.end());
  s.r.resize(d);
  s.u.resize(d);
  s.n.resize(d);
  std::vector<T> rh(d);
  for (std::size_t j = 0; j < d; ++j) {
    s.r[j] = static_cast<T>(sigmoid(ar[j]));
    s.u[j] = static_cast<T>(sigmoid(au[j]));
    rh[j] = s.r[j] * h[j];
  }
  add_vec_mat<T>(x, g.w_in, an);
  add_vec_mat<T>(rh, g.w_hn, an);
  for (std::size_t j = 0; j < d; ++j) s.n[j] = static_cast<T>(std::tanh(an[j]));
  s.h = std::move(h);
  return s;
}

template <typename T>
std::vector<T> step_output(const GateStep<T>& s) {
  std::vector<T> out(s.h.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = (T(1) - s.u[j]) * s.n[j] + s.u[j] * s.h[j];
  }
  return out;
}

// Returns dL/dh for the step's incoming hidden state.
template <typename T>
std::vector<double> step_backward(const BlendGate<T>& g, const GateStep<T>& s,
                                  std::span<const double> dout, BlendGate<T>& grads) {
  const std::size_t d = g.dim();
  std::vector<double> dh(d, 0.0), da_n(d), da_u(d), da_r(d, 0.0);
  std::vector<T> rh(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double u = s.u[j], n = s.n[j], h = s.h[j];
    dh[j] = dout[j] * u;
    da_n[j] = dout[j] * (1.0 - u) * (1.0 - n * n);
    da_u[j] = dout[j] * (h - n) * u * (1.0 - u);
    rh[j] = s.r[j] * s.h[j];
  }
  std::vector<double> d_rh(d, 0.0);
  add_mat_vec(g.w_hn, da_n, d_rh);
  for (std::size_t j = 0; j < d; ++j) {
    const double r = s.r[j];
    dh[j] += d_rh[j] * r;
    da_r[j] = d_rh[j] * s.h[j] * r * (1.0 - r);
  }
  add_mat_vec(g.w_hu, da_u, dh);
  add_mat_vec(g.w_hr, da_r, dh);

  const std::span<const T> x(s.x), h(s.h);
  add_outer<T>(x, da_r, grads.w_ir);
  add_outer<T>(x, da_u, grads.w_iu);
  add_outer<T>(x, da_n, grads.w_in);
  add_outer<T>(h, da_r, grads.w_hr);
  add_outer<T>(h, da_u, grads.w_hu);
  add_outer<T>(std::span<const T>(rh), da_n, grads.w_hn);
  add_bias(da_r, grads.b_r);
  add_bias(da_u, grads.b_u);
  add_bias(da_n, grads.b_n);
  return dh;
}

}  // namespace

template <typename T>
BlendGate<T>::BlendGate(std::size_t dim)
    : w_ir(dim, dim), w_iu(dim, dim), w_in(dim, dim),
      w_hr(dim, dim), w_hu(dim, dim), w_hn(dim, dim),
      b_r(1, dim), b_u(1, dim), b_n(1, dim) {}

template <typename T>
BlendGate<T> BlendGate<T>::create(std::size_t dim, Rng& rng) {
  BlendGate g(dim);
  for (std::size_t b = 0; b < 6; ++b) *g.blocks()[b] = xavier_init<T>(dim, dim, rng);
  return g;
}

template <typename T>
std::array<Matrix<T>*, 9> BlendGate<T>::blocks() {
  return {&w_ir, &w_iu, &w_in, &w_hr, &w_hu, &w_hn, &b_r, &b_u, &b_n};
}

template <typename T>
std::array<const Matrix<T>*, 9> BlendGate<T>::blocks() const {
  return {&w_ir, &w_iu, &w_in, &w_hr, &w_hu, &w_hn, &b_r, &b_u, &b_n};
}

template <typename T>
void BlendGate<T>::zero() {
  for (auto* b : blocks()) b->fill(T(0));
}

template <typename T>
BlendTrace<T> blend_forward(const BlendGate<T>& gate, std::span<const T> z0,
                            std::span<const T> zc) {
  const std::size_t d = gate.dim();
  if (z0.size() != d || zc.size() != d) {
    throw ContractViolation("blend: latent width does not match the gate");
  }
  BlendTrace<T> trace;
  trace.steps[0] = step(gate, z0, std::vector<T>(d, T(0)));
  trace.steps[1] = step(gate, zc, step_output(trace.steps[0]));
  trace.output = step_output(trace.steps[1]);
  return trace;
}

template <typename T>
std::vector<T> blend(const BlendGate<T>& gate, std::span<const T> z0,
                     std::span<const T> zc) {
  return blend_forward(gate, z0, zc).output;
}

template <typename T>
void blend_backward(const BlendGate<T>& gate, const BlendTrace<T>& trace,
                    std::span<const T> d_output, BlendGate<T>& grads) {
  if (d_output.size() != gate.dim() || grads.dim() != gate.dim()) {
    throw ContractViolation("blend_backward: width mismatch");
  }
  const std::vector<double> d2(d_output.begin(), d_output.end());
  const auto d1 = step_backward(gate, trace.steps[1], d2, grads);
  step_backward(gate, trace.steps[0], d1, grads);
}

CheckpointSection gate_section(const BlendGate<float>& gate,
                               const nlohmann::json& meta) {
  CheckpointSection s;
  s.tag = kGateSectionTag;
  s.header = meta;
  s.header["dim"] = gate.dim();
  const auto blocks = gate.blocks();
  for (std::size_t b = 0; b < 9; ++b) s.tensors.push_back({kGateNames[b], *blocks[b]});
  return s;
}

BlendGate<float> gate_from_section(const CheckpointSection& section) {
  if (section.tag != kGateSectionTag || section.tensors.size() != 9) {
    throw CheckpointError("malformed gate section");
  }
  const std::size_t d = section.tensors[0].value.rows();
  BlendGate<float> g(d);
  auto blocks = g.blocks();
  for (std::size_t b = 0; b < 9; ++b) {
    const auto& t = section.tensors[b];
    if (t.name != kGateNames[b] || t.value.rows() != blocks[b]->rows() ||
        t.value.cols() != blocks[b]->cols()) {
      throw CheckpointError("gate tensor " + t.name + " has unexpected name or shape");
    }
    *blocks[b] = t.value;
  }
  return g;
}

std::string gate_digest(const BlendGate<float>& gate) {
  return tensor_digest(gate_section(gate).tensors);
}

#define CRITIQ_INSTANTIATE(T)                                                   \
  template struct BlendGate<T>;                                                 \
  template BlendTrace<T> blend_forward(const BlendGate<T>&, std::span<const T>, \
                                       std::span<const T>);                     \
  template std::vector<T> blend(const BlendGate<T>&, std::span<const T>,        \
                                std::span<const T>);                            \
  template void blend_backward(const BlendGate<T>&, const BlendTrace<T>&,       \
                               std::span<const T>, BlendGate<T>&);

CRITIQ_INSTANTIATE(float)
CRITIQ_INSTANTIATE(double)

#undef CRITIQ_INSTANTIATE

}  // namespace critiq
