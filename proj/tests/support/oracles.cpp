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

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "critiq/critique/blend_gate.hpp"
#include "critiq/critique/blender_trainer.hpp"
#include "critiq/critique/max_margin.hpp"
#include "critiq/eval/metrics.hpp"
#include "critiq/model/elbo.hpp"

namespace critiq::oracle {
namespace {

bool is_relevant(const std::vector<Index>& relevant, Index item) {
  for (Index r : relevant) {
    if (r == item) return true;
  }
  return false;
}

std::size_t distinct_count(const std::vector<Index>& v) {
  return std::set<Index>(v.begin(), v.end()).size();
}

double dcg(const std::vector<double>& gains) {
  double out = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) out += gains[k] / std::log2(k + 2.0);
  return out;
}

std::vector<double> gains_of(const std::vector<Index>& ranking,
                             const std::vector<Index>& relevant) {
  std::vector<double> g;
  for (Index item : ranking) g.push_back(is_relevant(relevant, item) ? 1.0 : 0.0);
  return g;
}

// Ranking extended by the relevant items it does not contain.
std::vector<Index> universe_of(const std::vector<Index>& ranking,
                               const std::vector<Index>& relevant) {
  std::vector<Index> all = ranking;
  for (Index r : relevant) {
    if (std::find(all.begin(), all.end(), r) == all.end()) all.push_back(r);
  }
  return all;
}

void track(MetricSweep& s, double a, double b) {
  s.max_error = std::max(s.max_error, std::abs(a - b));
}

void compare_all(MetricSweep& s, const std::vector<Index>& ranking,
                 const std::vector<Index>& relevant) {
  ++s.instances;
  track(s, critiq::ndcg(ranking, relevant), ndcg(ranking, relevant));
  track(s, critiq::r_precision(ranking, relevant), r_precision(ranking, relevant));
  for (std::size_t n = 1; n <= ranking.size() + 2; ++n) {
    track(s, critiq::precision_at(ranking, relevant, n), precision_at(ranking, relevant, n));
    track(s, critiq::recall_at(ranking, relevant, n), recall_at(ranking, relevant, n));
    track(s, critiq::map_at(ranking, relevant, n), map_at(ranking, relevant, n));
  }
}

}  // namespace

double ndcg(const std::vector<Index>& ranking, const std::vector<Index>& relevant) {
  auto ideal = gains_of(universe_of(ranking, relevant), relevant);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  return dcg(gains_of(ranking, relevant)) / dcg(ideal);
}

double ndcg_brute_force(const std::vector<Index>& ranking,
                        const std::vector<Index>& relevant) {
  auto items = universe_of(ranking, relevant);
  std::sort(items.begin(), items.end());
  double best = 0.0;
  do {
    best = std::max(best, dcg(gains_of(items, relevant)));
  } while (std::next_permutation(items.begin(), items.end()));
  return dcg(gains_of(ranking, relevant)) / best;
}

double precision_at(const std::vector<Index>& ranking,
                    const std::vector<Index>& relevant, std::size_t n) {
  double hits = 0;
  for (std::size_t k = 0; k < n && k < ranking.size(); ++k) {
    if (is_relevant(relevant, ranking[k])) hits += 1;
  }
  return hits / static_cast<double>(n);
}

double recall_at(const std::vector<Index>& ranking, const std::vector<Index>& relevant,
                 std::size_t n) {
  double hits = 0;
  for (std::size_t k = 0; k < n && k < ranking.size(); ++k) {
    if (is_relevant(relevant, ranking[k])) hits += 1;
  }
  return hits / static_cast<double>(distinct_count(relevant));
}

double map_at(const std::vector<Index>& ranking, const std::vector<Index>& relevant,
              std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n && k < ranking.size(); ++k) {
    if (!is_relevant(relevant, ranking[k])) continue;
    // precision at k + 1, recounted from scratch
    double hits = 0;
    for (std::size_t j = 0; j <= k; ++j) hits += is_relevant(relevant, ranking[j]) ? 1 : 0;
    sum += hits / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(std::min(n, distinct_count(relevant)));
}

double r_precision(const std::vector<Index>& ranking, const std::vector<Index>& relevant) {
  return precision_at(ranking, relevant, distinct_count(relevant));
}

double f_map(const std::vector<Index>& before, const std::vector<Index>& after,
             const std::vector<Index>& affected, std::size_t n) {
  return map_at(before, affected, n) - map_at(after, affected, n);
}

MetricSweep exhaustive_metric_sweep(std::size_t max_len) {
  MetricSweep s;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Index> ranking(len);
    std::iota(ranking.begin(), ranking.end(), 0);
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << len); ++pattern) {
      for (std::size_t missing = 0; missing <= 2; ++missing) {
        std::vector<Index> relevant;
        for (std::size_t k = 0; k < len; ++k) {
          if (pattern & (std::size_t{1} << k)) relevant.push_back(static_cast<Index>(k));
        }
        for (std::size_t m = 0; m < missing; ++m) {
          relevant.push_back(static_cast<Index>(len + m));
        }
        if (relevant.empty()) continue;
        compare_all(s, ranking, relevant);
      }
    }
  }
  return s;
}

MetricSweep exhaustive_fmap_sweep(std::size_t max_len) {
  MetricSweep s;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Index> before(len);
    std::iota(before.begin(), before.end(), 0);
    std::vector<std::vector<Index>> orders;
    do {
      orders.push_back(before);
    } while (std::next_permutation(before.begin(), before.end()));
    for (const auto& b : orders) {
      for (const auto& a : orders) {
        for (std::size_t pattern = 1; pattern < (std::size_t{1} << len); ++pattern) {
          std::vector<Index> affected;
          for (std::size_t k = 0; k < len; ++k) {
            if (pattern & (std::size_t{1} << k)) affected.push_back(static_cast<Index>(k));
          }
          for (std::size_t n = 1; n <= len; ++n) {
            ++s.instances;
            track(s, critiq::f_map(b, a, affected, n), f_map(b, a, affected, n));
          }
        }
      }
    }
  }
  return s;
}

MetricSweep random_metric_sweep(std::size_t instances, std::uint64_t seed) {
  MetricSweep s;
  Rng rng(seed);
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t catalog = std::uniform_int_distribution<std::size_t>(11, 60)(rng);
    std::vector<Index> items(catalog);
    std::iota(items.begin(), items.end(), 0);
    std::shuffle(items.begin(), items.end(), rng);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(11, catalog)(rng);
    std::vector<Index> ranking(items.begin(), items.begin() + len);
    std::vector<Index> relevant;
    std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.05, 0.6)(rng));
    for (Index i : items) {
      if (coin(rng)) relevant.push_back(i);
    }
    if (relevant.empty()) relevant.push_back(items.back());
    compare_all(s, ranking, relevant);
    auto after = ranking;
    std::shuffle(after.begin(), after.end(), rng);
    for (std::size_t n : {5, 10, 20}) {
      track(s, critiq::f_map(ranking, after, relevant, n), f_map(ranking, after, relevant, n));
    }
  }
  return s;
}

double gradient_check(const std::vector<GradientBlock>& blocks,
                      const std::function<double()>& loss, double step) {
  double worst = 0.0;
  for (const auto& block : blocks) {
    double diff = 0.0, a_norm = 0.0, n_norm = 0.0;
    for (std::size_t i = 0; i < block.param.size(); ++i) {
      const double saved = block.param[i];
      block.param[i] = saved + step;
      const double up = loss();
      block.param[i] = saved - step;
      const double down = loss();
      block.param[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double analytic = block.analytic[i];
      diff += (analytic - numeric) * (analytic - numeric);
      a_norm += analytic * analytic;
      n_norm += numeric * numeric;
    }
    const double scale = std::max({std::sqrt(a_norm), std::sqrt(n_norm), 1e-12});
    worst = std::max(worst, std::sqrt(diff) / scale);
  }
  return worst;
}

namespace {

Matrix<double> random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix<double> m(rows, cols);
  for (double& v : m.values()) v = normal(rng);
  return m;
}

std::vector<IndexList> random_rows(std::size_t rows, std::size_t cols, Rng& rng,
                                   bool non_empty = true) {
  std::vector<IndexList> out(rows);
  std::bernoulli_distribution coin(0.4);
  for (auto& row : out) {
    for (Index c = 0; c < cols; ++c) {
      if (coin(rng)) row.push_back(c);
    }
    if (non_empty && row.empty()) {
      row.push_back(std::uniform_int_distribution<Index>(0, static_cast<Index>(cols) - 1)(rng));
    }
  }
  return out;
}

SparseRows as_spans(const std::vector<IndexList>& rows) {
  return SparseRows(rows.begin(), rows.end());
}

std::vector<GradientBlock> model_blocks(MmvaeModel<double>& model,
                                        const ModelGradients<double>& grads) {
  std::vector<GradientBlock> blocks;
  TwoLayerNet<double>* nets[] = {&model.enc_r, &model.enc_k, &model.dec_r, &model.dec_k};
  const NetGradients<double>* g[] = {&grads.enc_r, &grads.enc_k, &grads.dec_r, &grads.dec_k};
  for (std::size_t n = 0; n < 4; ++n) {
    const auto params = nets[n]->mutable_blocks();
    const auto gb = g[n]->blocks();
    for (std::size_t b = 0; b < 4; ++b) {
      blocks.push_back({params[b]->values(), gb[b]->values()});
    }
  }
  return blocks;
}

// Small random model with biases perturbed away from zero.
MmvaeModel<double> random_model(const ModelDims& dims, Rng& rng) {
  auto model = MmvaeModel<double>::create(dims, rng);
  for (auto* net : {&model.enc_r, &model.enc_k, &model.dec_r, &model.dec_k}) {
    const auto blocks = net->mutable_blocks();
    for (std::size_t b : {1u, 3u}) {
      *blocks[b] = random_matrix(1, blocks[b]->cols(), rng, 0.1);
    }
  }
  return model;
}

ModelDims random_dims(Rng& rng) {
  std::uniform_int_distribution<std::size_t> items(4, 12), kps(3, 6), latent(2, 8);
  ModelDims d;
  d.n_items = items(rng);
  d.n_keyphrases = kps(rng);
  d.latent = latent(rng);
  d.hidden = latent(rng);
  return d;
}

constexpr std::uint64_t kDropoutSeed = 99;

}  // namespace

double check_net_gradients(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t in = 5, hidden = 4, out = 3, batch = 3;
  auto net = TwoLayerNet<double>::xavier(in, hidden, out, rng);
  net.mutable_blocks()[1]->values()[0] = 0.2;
  auto x = random_matrix(batch, in, rng);
  const auto upstream = random_matrix(batch, out, rng);
  const double dropout = 0.25;

  const auto loss = [&] {
    Rng r(kDropoutSeed);
    const auto cache = net.forward(x, dropout, true, r);
    double s = 0.0;
    for (std::size_t i = 0; i < upstream.size(); ++i) {
      s += upstream.values()[i] * cache.output.values()[i];
    }
    return s;
  };
  Rng r(kDropoutSeed);
  const auto cache = net.forward(x, dropout, true, r);
  auto grads = net.zero_gradients();
  const auto dx = net.backward(cache, upstream, &grads, true);

  std::vector<GradientBlock> blocks;
  const auto params = net.mutable_blocks();
  const auto gb = grads.blocks();
  for (std::size_t b = 0; b < 4; ++b) blocks.push_back({params[b]->values(), gb[b]->values()});
  blocks.push_back({x.values(), dx.values()});
  return gradient_check(blocks, loss, 1e-5);
}

double check_elbo_joint_gradients(std::uint64_t seed) {
  Rng rng(seed);
  const auto dims = random_dims(rng);
  auto model = random_model(dims, rng);
  const std::size_t batch = 6;
  const auto r_rows = random_rows(batch, dims.n_items, rng);
  const auto k_rows = random_rows(batch, dims.n_keyphrases, rng);
  const auto r = as_spans(r_rows);
  const auto k = as_spans(k_rows);
  const auto eps_r = standard_normal<double>(batch, dims.latent, rng);
  const auto eps_k = standard_normal<double>(batch, dims.latent, rng);
  TermOptions opts;
  opts.weights = {1.5, 0.7};
  opts.dropout = 0.2;
  opts.training = true;

  const auto loss = [&] {
    Rng d(kDropoutSeed);
    return elbo_joint(model, r, k, eps_r, eps_k, MixtureEstimator::kStratified, opts, d,
                      static_cast<ModelGradients<double>*>(nullptr));
  };
  auto grads = ModelGradients<double>::zeros_like(model);
  Rng d(kDropoutSeed);
  elbo_joint(model, r, k, eps_r, eps_k, MixtureEstimator::kStratified, opts, d, &grads);
  return gradient_check(model_blocks(model, grads), loss, 1e-5);
}

double check_elbo_single_gradients(std::uint64_t seed) {
  Rng rng(seed);
  const auto dims = random_dims(rng);
  auto model = random_model(dims, rng);
  const std::size_t batch = 5;
  double worst = 0.0;
  for (Modality m : {Modality::kInteractions, Modality::kKeyphrases}) {
    const std::size_t cols =
        m == Modality::kInteractions ? dims.n_items : dims.n_keyphrases;
    const auto rows = random_rows(batch, cols, rng);
    const auto x = as_spans(rows);
    const auto eps = standard_normal<double>(batch, dims.latent, rng);
    TermOptions opts;
    opts.weights = {2.0, 0.3};
    const auto loss = [&] {
      Rng d(kDropoutSeed);
      return elbo_single(model, m, x, eps, opts, d,
                         static_cast<ModelGradients<double>*>(nullptr));
    };
    auto grads = ModelGradients<double>::zeros_like(model);
    Rng d(kDropoutSeed);
    elbo_single(model, m, x, eps, opts, d, &grads);
    worst = std::max(worst, gradient_check(model_blocks(model, grads), loss, 1e-5));
  }
  return worst;
}

double check_gate_gradients(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t dim = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
  auto gate = BlendGate<double>::create(dim, rng);
  for (auto* b : {&gate.b_r, &gate.b_u, &gate.b_n}) *b = random_matrix(1, dim, rng, 0.3);
  const auto z0 = random_matrix(1, dim, rng);
  const auto zc = random_matrix(1, dim, rng);
  const auto w = random_matrix(1, dim, rng);

  const auto loss = [&] {
    const auto h = blend(gate, z0.values(), zc.values());
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += w.values()[i] * h[i];
    return s;
  };
  BlendGate<double> grads(dim);
  blend_backward(gate, blend_forward(gate, z0.values(), zc.values()), w.values(), grads);
  std::vector<GradientBlock> blocks;
  const auto params = gate.blocks();
  const auto gb = grads.blocks();
  for (std::size_t b = 0; b < 9; ++b) blocks.push_back({params[b]->values(), gb[b]->values()});
  return gradient_check(blocks, loss, 1e-6);
}

double check_margin_gradients(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 12;
  std::vector<double> before(n), after(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  IndexList affected, unaffected;
  for (Index i = 0; i < n; ++i) {
    before[i] = normal(rng);
    after[i] = normal(rng);
    (i % 3 == 0 ? affected : unaffected).push_back(i);
  }
  const double margin = 0.5;
  // Keep every hinge at least 1e-3 away from its kink.
  for (Index i = 0; i < n; ++i) {
    const bool plus = i % 3 == 0;
    const double slack = plus ? margin - (before[i] - after[i]) : margin - (after[i] - before[i]);
    if (std::abs(slack) < 1e-3) after[i] += plus ? 0.01 : -0.01;
  }
  const auto loss = [&] {
    return max_margin_loss<double>(before, after, affected, unaffected, margin).loss;
  };
  const auto grad = max_margin_loss<double>(before, after, affected, unaffected, margin).grad_after;
  return gradient_check({{after, grad}}, loss, 1e-6);
}

double check_blender_objective_gradients(std::uint64_t seed) {
  Rng rng(seed);
  const auto dims = random_dims(rng);
  const auto model = random_model(dims, rng);
  auto gate = BlendGate<double>::create(dims.latent, rng);
  for (auto* b : {&gate.b_r, &gate.b_u, &gate.b_n}) {
    *b = random_matrix(1, dims.latent, rng, 0.3);
  }
  const std::size_t users = 4;
  const SparseBinaryMatrix r_train(dims.n_items, random_rows(users, dims.n_items, rng));
  const SparseBinaryMatrix r_val(dims.n_items, random_rows(users, dims.n_items, rng));
  const SparseBinaryMatrix k_item(dims.n_keyphrases,
                                  random_rows(dims.n_items, dims.n_keyphrases, rng));
  const auto set = build_synthetic_dataset(r_val, k_item, rng);
  std::vector<const SyntheticExample*> batch;
  for (const auto& ex : set.examples) batch.push_back(&ex);
  const auto user_latents = base_latents(model, r_train);
  const auto kp_latents = critique_latents(model);
  const double margin = 0.8;

  const auto loss = [&] {
    return blender_objective<double>(model, gate, batch, user_latents, kp_latents, margin,
                                     nullptr);
  };
  BlendGate<double> grads(dims.latent);
  blender_objective<double>(model, gate, batch, user_latents, kp_latents, margin, &grads);
  std::vector<GradientBlock> blocks;
  const auto params = gate.blocks();
  const auto gb = grads.blocks();
  for (std::size_t b = 0; b < 9; ++b) blocks.push_back({params[b]->values(), gb[b]->values()});
  return gradient_check(blocks, loss, 1e-6);
}

std::vector<std::vector<SyntheticExample>> possible_examples(
    const SparseBinaryMatrix& r_val, const SparseBinaryMatrix& k_item,
    const std::vector<IndexList>* universe) {
  std::vector<std::vector<SyntheticExample>> out;
  for (std::size_t u = 0; u < r_val.n_rows(); ++u) {
    for (Index item : r_val.row(u)) {
      std::vector<SyntheticExample> options;
      for (Index c = 0; c < k_item.n_cols(); ++c) {
        if (k_item.contains(item, c)) continue;
        SyntheticExample ex{static_cast<Index>(u), item, c, {}, {}};
        for (Index i = 0; i < k_item.n_rows(); ++i) {
          if (universe != nullptr) {
            const auto& allowed = (*universe)[u];
            if (std::find(allowed.begin(), allowed.end(), i) == allowed.end()) continue;
          }
          (k_item.contains(i, c) ? ex.affected : ex.unaffected).push_back(i);
        }
        options.push_back(std::move(ex));
      }
      out.push_back(std::move(options));
    }
  }
  return out;
}

bool synthetic_matches(const SyntheticSet& emitted, const SparseBinaryMatrix& r_val,
                       const SparseBinaryMatrix& k_item,
                       const std::vector<IndexList>* universe) {
  const auto options = possible_examples(r_val, k_item, universe);
  std::size_t next = 0, skipped = 0;
  for (const auto& opts : options) {
    if (opts.empty()) {
      ++skipped;
      continue;
    }
    if (next >= emitted.examples.size()) return false;
    const auto& ex = emitted.examples[next++];
    if (std::find(opts.begin(), opts.end(), ex) == opts.end()) return false;
  }
  return next == emitted.examples.size() && skipped == emitted.skipped;
}

std::size_t synthetic_invariant_failures(std::size_t instances, std::uint64_t seed) {
  Rng rng(seed);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t nu = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    const std::size_t ni = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const std::size_t nk = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    const SparseBinaryMatrix r_val(ni, random_rows(nu, ni, rng, false));
    const SparseBinaryMatrix k_item(nk, random_rows(ni, nk, rng, false));
    std::vector<IndexList> universe;
    const bool restrict = std::bernoulli_distribution(0.5)(rng);
    if (restrict) universe = random_rows(nu, ni, rng, false);
    const auto* uni = restrict ? &universe : nullptr;
    const auto set = build_synthetic_dataset(r_val, k_item, rng, uni);

    bool ok = synthetic_matches(set, r_val, k_item, uni);
    for (const auto& ex : set.examples) {
      ok = ok && !k_item.contains(ex.item, ex.critique);
      IndexList cover = ex.affected;
      cover.insert(cover.end(), ex.unaffected.begin(), ex.unaffected.end());
      std::sort(cover.begin(), cover.end());
      const bool disjoint = std::adjacent_find(cover.begin(), cover.end()) == cover.end();
      IndexList expected;
      if (restrict) {
        expected = universe[ex.user];
      } else {
        expected.resize(ni);
        std::iota(expected.begin(), expected.end(), 0);
      }
      ok = ok && disjoint && cover == expected;
      for (Index i : ex.affected) ok = ok && k_item.contains(i, ex.critique);
      for (Index i : ex.unaffected) ok = ok && !k_item.contains(i, ex.critique);
    }
    if (!ok) ++failures;
  }
  return failures;
}

MicroInstance micro_instance() {
  // item 0 carries {0}, item 1 carries {1}, item 2 carries both.
  MicroInstance m;
  m.k_item = SparseBinaryMatrix(2, {{0}, {1}, {0, 1}});
  m.r_val = SparseBinaryMatrix(3, {{0, 2}, {1}});
  m.expected = {
      {0, 0, 1, {1, 2}, {0}},
      {1, 1, 0, {0, 2}, {1}},
  };
  m.expected_skipped = 1;
  return m;
}

}  // namespace critiq::oracle
