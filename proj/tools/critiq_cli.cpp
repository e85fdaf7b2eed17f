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

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "critiq/critique/blender_trainer.hpp"
#include "critiq/critique/blenders.hpp"
#include "critiq/data/dataset.hpp"
#include "critiq/error.hpp"
#include "critiq/eval/critique_effect.hpp"
#include "critiq/eval/evaluate.hpp"
#include "critiq/eval/latency.hpp"
#include "critiq/eval/simulator.hpp"
#include "critiq/model/checkpoint.hpp"
#include "critiq/model/trainer.hpp"
#include "critiq/service/http_server.hpp"

namespace {

using namespace critiq;

struct IngestArgs {
  std::string interactions, item_keyphrases, user_keyphrases, out;
  double threshold = 3.5;
  std::uint64_t seed = 1;
  bool toy = false;
  std::size_t users = 200, items = 100, keyphrases = 20, clusters = 4;
};

struct TrainArgs {
  std::string data, out, preset = "toy", estimator = "stratified", loss_trace;
  TrainingConfig config;
  double observed_fraction = 1.0;
};

struct BlenderArgs {
  std::string data, model, out, preset = "toy";
  BlenderConfig config;
};

struct ModelArgs {
  std::string data, model;
  std::string blender = "gate", composition = "average";
};

struct EvaluateArgs {
  ModelArgs m;
  std::string split = "test", input = "r", out;
  bool popularity = false;
  std::size_t effect_samples = 500;
  std::uint64_t seed = 1;
};

struct SimulateArgs {
  ModelArgs m;
  std::string strategy = "random", pool = "300", out, trace;
  SimulationConfig config;
};

struct ServeArgs {
  ModelArgs m;
  std::string host = "127.0.0.1", ui;
  int port = 8080;
  ServiceConfig config;
  long ttl = 3600;
};

struct LatencyArgs {
  ModelArgs m;
  std::size_t critiques = 1000, warmup = 50;
  std::size_t latent = 300, items = 4000, keyphrases = 75;
  std::uint64_t seed = 1;
};

void write_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << j.dump(2) << "\n";
  spdlog::info("wrote {}", path);
}

struct Loaded {
  Dataset dataset;
  Checkpoint checkpoint;
};

Loaded load(const ModelArgs& a) {
  Loaded l;
  l.dataset = load_bundle(a.data);
  l.checkpoint = load_checkpoint(a.model, {std::nullopt, ids_digest(l.dataset)});
  return l;
}

std::unique_ptr<Blender> make_blender(const ModelArgs& a, const Checkpoint& ckpt) {
  if (a.blender == "uac") return std::make_unique<UacBlender>();
  if (a.blender == "bac") return std::make_unique<BacBlender>();
  if (a.blender != "gate") throw ValidationError("unknown blender '" + a.blender + "'");
  const auto* section = ckpt.section(kGateSectionTag);
  if (section == nullptr) {
    throw ValidationError("checkpoint has no trained gate; run train-blender or pick uac/bac");
  }
  const auto composition = a.composition == "sequential" ? Composition::kSequential
                                                         : Composition::kAverageThenBlend;
  if (a.composition != "average" && a.composition != "sequential") {
    throw ValidationError("unknown composition '" + a.composition + "'");
  }
  return std::make_unique<GateBlender>(gate_from_section(*section), composition);
}

void add_model_options(CLI::App* cmd, ModelArgs& a, bool need_data = true) {
  auto* data = cmd->add_option("--data", a.data, "Dataset bundle directory")->envname("CRITIQ_DATA");
  if (need_data) data->required();
  cmd->add_option("--model", a.model, "Checkpoint path")->envname("CRITIQ_MODEL")->required();
  cmd->add_option("--blender", a.blender, "gate, uac or bac")->capture_default_str();
  cmd->add_option("--composition", a.composition, "average or sequential (gate only)")
      ->capture_default_str();
}

int run_ingest(const IngestArgs& a) {
  Dataset ds;
  if (a.toy) {
    ds = generate_toy_dataset(a.users, a.items, a.keyphrases, a.clusters, a.seed);
  } else {
    if (a.interactions.empty() || a.item_keyphrases.empty()) {
      throw ValidationError("--interactions and --item-keyphrases are required without --toy");
    }
    IngestOptions o;
    o.interactions = a.interactions;
    o.item_keyphrases = a.item_keyphrases;
    if (!a.user_keyphrases.empty()) o.user_keyphrases = a.user_keyphrases;
    o.threshold = a.threshold;
    o.seed = a.seed;
    ds = ingest_dataset(o);
  }
  std::filesystem::create_directories(a.out);
  save_bundle(ds, a.out);
  spdlog::info("bundle {}: {} users, {} items, {} keyphrases, {} train positives", a.out,
               ds.n_users(), ds.n_items(), ds.n_keyphrases(), ds.r_train.nnz());
  return 0;
}

int run_train(TrainArgs a, const CLI::App& cmd) {
  TrainingConfig c = training_preset(a.preset);
  const auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--latent-dim")) c.latent_dim = a.config.latent_dim;
  if (given("--hidden-dim")) c.hidden_dim = a.config.hidden_dim;
  if (given("--lr")) c.learning_rate = a.config.learning_rate;
  if (given("--lambda")) c.lambda = a.config.lambda;
  if (given("--beta")) c.beta_target = a.config.beta_target;
  if (given("--anneal-steps")) c.anneal_steps = a.config.anneal_steps;
  if (given("--epochs")) c.epochs = a.config.epochs;
  if (given("--batch-size")) c.batch_size = a.config.batch_size;
  if (given("--dropout")) c.dropout = a.config.dropout;
  if (given("--l2")) c.l2_weight = a.config.l2_weight;
  if (given("--seed")) c.seed = a.config.seed;
  if (a.estimator == "sample") {
    c.estimator = MixtureEstimator::kSampleExpert;
  } else if (a.estimator != "stratified") {
    throw ValidationError("unknown estimator '" + a.estimator + "'");
  }
  c.validate();

  const Dataset ds = load_bundle(a.data);
  const ModalityMask mask = a.observed_fraction >= 1.0
                                ? full_mask(ds.n_users())
                                : apply_modality_mask(ds.n_users(), a.observed_fraction, c.seed);
  auto model = create_model(ds, c);
  spdlog::info("training H={} on {} users for {} epochs", c.latent_dim, ds.n_users(), c.epochs);
  const auto report = train(model, ds, mask, c, [](std::size_t epoch, double loss) {
    spdlog::info("epoch {:4d}  loss {:.6f}", epoch + 1, loss);
  });
  Checkpoint ckpt;
  ckpt.config = c;
  ckpt.ids_digest = ids_digest(ds);
  ckpt.model = std::move(model);
  save_checkpoint(ckpt, a.out);
  spdlog::info("wrote {} ({} steps)", a.out, report.steps);
  if (!a.loss_trace.empty()) write_json({{"epoch_loss", report.epoch_loss}}, a.loss_trace);
  return 0;
}

int run_train_blender(BlenderArgs a, const CLI::App& cmd) {
  BlenderConfig c = blender_preset(a.preset);
  const auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--margin")) c.margin = a.config.margin;
  if (given("--lr")) c.learning_rate = a.config.learning_rate;
  if (given("--l2")) c.l2_weight = a.config.l2_weight;
  if (given("--epochs")) c.epochs = a.config.epochs;
  if (given("--batch-size")) c.batch_size = a.config.batch_size;
  if (given("--restrict-top")) c.restrict_top = a.config.restrict_top;
  if (given("--seed")) c.seed = a.config.seed;
  c.validate();

  const Dataset ds = load_bundle(a.data);
  Checkpoint ckpt = load_checkpoint(a.model, {std::nullopt, ids_digest(ds)});
  const std::string digest_before = parameter_digest(ckpt.model);
  Rng rng(c.seed);
  auto gate = BlendGate<float>::create(ckpt.dims.latent, rng);
  train_blender(ckpt.model, ds, gate, c, [](std::size_t epoch, double loss) {
    spdlog::info("blender epoch {:3d}  loss {:.6f}", epoch + 1, loss);
  });
  if (parameter_digest(ckpt.model) != digest_before) {
    throw ContractViolation("model parameters changed during blender training");
  }
  std::erase_if(ckpt.sections, [](const CheckpointSection& s) { return s.tag == kGateSectionTag; });
  ckpt.sections.push_back(gate_section(
      gate, {{"margin", c.margin}, {"learning_rate", c.learning_rate}, {"epochs", c.epochs}}));
  const std::string out = a.out.empty() ? a.model : a.out;
  save_checkpoint(ckpt, out);
  spdlog::info("wrote {} (model digest {} unchanged)", out, digest_before);
  return 0;
}

int run_evaluate(const EvaluateArgs& a) {
  const auto l = load(a.m);
  const EvalSplit split = a.split == "val" ? EvalSplit::kValidation : EvalSplit::kTest;
  if (a.split != "val" && a.split != "test") throw ValidationError("--split must be val or test");
  EvalInput input = EvalInput::kInteractions;
  if (a.input == "k") {
    input = EvalInput::kKeyphrases;
  } else if (a.input == "both") {
    input = EvalInput::kBoth;
  } else if (a.input != "r") {
    throw ValidationError("--input must be r, k or both");
  }
  nlohmann::json out = {{"split", a.split}, {"input", a.input},
                        {"model", to_json(evaluate(l.checkpoint.model, l.dataset, split, input))}};
  if (a.popularity) out["popularity"] = to_json(evaluate_popularity(l.dataset, split));
  if (a.effect_samples > 0 &&
      (a.m.blender != "gate" || l.checkpoint.section(kGateSectionTag) != nullptr)) {
    const auto blender = make_blender(a.m, l.checkpoint);
    const auto effect = critique_effect(l.checkpoint.model, *blender, l.dataset,
                                        {a.effect_samples, 20, a.seed});
    out["critique_effect"] = {{"blender", blender->name()},
                              {"samples", effect.samples.size()},
                              {"f_map@20", to_json(effect.f_map)}};
  }
  write_json(out, a.out);
  return 0;
}

int run_simulate(SimulateArgs a) {
  const auto l = load(a.m);
  const auto blender = make_blender(a.m, l.checkpoint);
  a.config.pool = a.pool == "full" ? 0 : std::stoul(a.pool);
  std::vector<Strategy> strategies;
  if (a.strategy == "all") {
    strategies = {Strategy::kRandom, Strategy::kPop, Strategy::kDiff};
  } else {
    strategies = {parse_strategy(a.strategy)};
  }
  nlohmann::json reports = nlohmann::json::array();
  std::optional<SimulationReport> first;
  for (Strategy s : strategies) {
    a.config.strategy = s;
    auto report = run_simulation(l.checkpoint.model, *blender, l.dataset, a.config);
    spdlog::info("{}: success {:.3f}, length {:.3f} over {} sessions", to_string(s),
                 report.success_rate.mean, report.session_length.mean, report.sessions);
    reports.push_back(to_json(report));
    if (!a.trace.empty()) {
      const std::string path =
          strategies.size() == 1 ? a.trace : a.trace + "." + to_string(s) + ".csv";
      write_trace_csv(report, l.dataset, path);
    }
  }
  write_json(strategies.size() == 1 ? reports[0] : nlohmann::json{{"reports", reports}}, a.out);
  return 0;
}

int run_serve(ServeArgs a) {
  auto l = load(a.m);
  auto blender = make_blender(a.m, l.checkpoint);
  a.config.session_ttl = std::chrono::seconds(a.ttl);
  Service service(std::move(l.dataset), std::move(l.checkpoint.model), std::move(blender),
                  a.config);
  std::optional<std::filesystem::path> ui;
  if (!a.ui.empty()) ui = a.ui;
  HttpServer server(service, ui);
  const int port = server.bind(a.host, a.port);
  spdlog::info("serving on http://{}:{}{}", a.host, port, ui ? " with UI" : "");
  return server.run() ? 0 : 1;
}

int run_latency(const LatencyArgs& a) {
  MmvaeModel<float> model;
  std::unique_ptr<Blender> blender;
  if (a.m.model.empty()) {
    Rng rng(a.seed);
    model = MmvaeModel<float>::create({a.items, a.keyphrases, a.latent, a.latent}, rng);
    if (a.m.blender == "gate") {
      blender = std::make_unique<GateBlender>(BlendGate<float>::create(a.latent, rng));
    } else {
      Checkpoint none;
      blender = make_blender(a.m, none);
    }
  } else {
    auto ckpt = load_checkpoint(a.m.model);
    blender = make_blender(a.m, ckpt);
    model = std::move(ckpt.model);
  }
  const auto report = latency_probe(model, *blender, a.critiques, a.warmup, a.seed);
  write_json(to_json(report), "");
  return 0;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Turns `key = value` lines of the subcommand's --config file into flags.
// Keys already given on the command line are skipped.
std::vector<std::string> expand_config(const CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const CLI::App* sub = nullptr;
  std::size_t sub_pos = 0;
  for (std::size_t i = 0; i < args.size() && sub == nullptr; ++i) {
    for (const auto* cmd : app.get_subcommands({})) {
      if (cmd->get_name() == args[i]) {
        sub = cmd;
        sub_pos = i;
      }
    }
  }
  if (sub == nullptr) return args;

  std::string path;
  for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path);

  const auto given = [&](const std::string& flag) {
    for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
      if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty() || line.front() == '[' || line.front() == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path, line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    const auto* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr || key == "config") {
      throw ParseError(path, line_no, "unknown key '" + key + "' for " + sub->get_name());
    }
    if (given(flag)) continue;
    if (opt->get_expected_max() == 0) {
      if (value == "true" || value == "1") extra.push_back(flag);
    } else {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critiq: multimodal VAE recommender with keyphrase critiquing"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string config_path;
  const auto with_config = [&config_path](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value file; command-line flags win");
  };

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Build a dataset bundle from raw files or the toy generator");
  with_config(c_ingest);
  c_ingest->add_option("--interactions", ingest.interactions, "user,item,rating file");
  c_ingest->add_option("--item-keyphrases", ingest.item_keyphrases, "item<TAB>keyphrase file");
  c_ingest->add_option("--user-keyphrases", ingest.user_keyphrases,
                       "user<TAB>keyphrase file (derived from training items if absent)");
  c_ingest->add_option("--threshold", ingest.threshold, "Ratings above this are positive")->capture_default_str();
  c_ingest->add_option("--seed", ingest.seed, "Split seed")->capture_default_str();
  c_ingest->add_option("--out", ingest.out, "Bundle directory")->required();
  c_ingest->add_flag("--toy", ingest.toy, "Generate the clustered toy dataset");
  c_ingest->add_option("--users", ingest.users)->capture_default_str();
  c_ingest->add_option("--items", ingest.items)->capture_default_str();
  c_ingest->add_option("--keyphrases", ingest.keyphrases)->capture_default_str();
  c_ingest->add_option("--clusters", ingest.clusters)->capture_default_str();

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Train the VAE and write a checkpoint");
  with_config(c_train);
  c_train->add_option("--data", tr.data, "Dataset bundle directory")->envname("CRITIQ_DATA")->required();
  c_train->add_option("--out", tr.out, "Checkpoint path")->required();
  c_train->add_option("--preset", tr.preset, "toy, beer, cds, yelp or hotel")->capture_default_str();
  c_train->add_option("--latent-dim", tr.config.latent_dim);
  c_train->add_option("--hidden-dim", tr.config.hidden_dim, "0 means the latent width");
  c_train->add_option("--lr", tr.config.learning_rate);
  c_train->add_option("--lambda", tr.config.lambda, "Reconstruction weight");
  c_train->add_option("--beta", tr.config.beta_target, "Final KL weight");
  c_train->add_option("--anneal-steps", tr.config.anneal_steps, "Minibatches of KL warm-up");
  c_train->add_option("--epochs", tr.config.epochs);
  c_train->add_option("--batch-size", tr.config.batch_size);
  c_train->add_option("--dropout", tr.config.dropout);
  c_train->add_option("--l2", tr.config.l2_weight);
  c_train->add_option("--seed", tr.config.seed);
  c_train->add_option("--estimator", tr.estimator, "stratified or sample")->capture_default_str();
  c_train->add_option("--observed-fraction", tr.observed_fraction,
                      "Share of users keeping both modalities")->capture_default_str();
  c_train->add_option("--loss-trace", tr.loss_trace, "Write per-epoch losses as JSON");

  BlenderArgs bl;
  auto* c_blend = app.add_subcommand("train-blender", "Train the critique gate on a frozen model");
  with_config(c_blend);
  c_blend->add_option("--data", bl.data, "Dataset bundle directory")->envname("CRITIQ_DATA")->required();
  c_blend->add_option("--model", bl.model, "Checkpoint path")->envname("CRITIQ_MODEL")->required();
  c_blend->add_option("--out", bl.out, "Output checkpoint (defaults to --model)");
  c_blend->add_option("--preset", bl.preset)->capture_default_str();
  c_blend->add_option("--margin", bl.config.margin);
  c_blend->add_option("--lr", bl.config.learning_rate);
  c_blend->add_option("--l2", bl.config.l2_weight);
  c_blend->add_option("--epochs", bl.config.epochs);
  c_blend->add_option("--batch-size", bl.config.batch_size);
  c_blend->add_option("--restrict-top", bl.config.restrict_top, "0 uses every item");
  c_blend->add_option("--seed", bl.config.seed);

  EvaluateArgs ev;
  auto* c_eval = app.add_subcommand("evaluate", "Ranking, explanation and critiquing metrics");
  with_config(c_eval);
  add_model_options(c_eval, ev.m);
  c_eval->add_option("--split", ev.split, "val or test")->capture_default_str();
  c_eval->add_option("--input", ev.input, "r, k or both")->capture_default_str();
  c_eval->add_flag("--popularity", ev.popularity, "Also report the popularity baseline");
  c_eval->add_option("--effect-samples", ev.effect_samples, "Critiques for F-MAP (0 skips)")
      ->capture_default_str();
  c_eval->add_option("--seed", ev.seed)->capture_default_str();
  c_eval->add_option("--out", ev.out, "Write the JSON report here instead of stdout");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Multi-step critiquing user simulation");
  with_config(c_sim);
  add_model_options(c_sim, sim.m);
  c_sim->add_option("--strategy", sim.strategy, "random, pop, diff or all")->capture_default_str();
  c_sim->add_option("--top-n", sim.config.top_n)->capture_default_str();
  c_sim->add_option("--pool", sim.pool, "Candidate pool size or 'full'")->capture_default_str();
  c_sim->add_option("--max-steps", sim.config.max_steps)->capture_default_str();
  c_sim->add_option("--max-sessions", sim.config.max_sessions, "0 runs every test pair")
      ->capture_default_str();
  c_sim->add_option("--diff-window", sim.config.diff_window)->capture_default_str();
  c_sim->add_option("--seed", sim.config.seed)->capture_default_str();
  c_sim->add_option("--out", sim.out, "Write the JSON report here instead of stdout");
  c_sim->add_option("--trace", sim.trace, "Per-step CSV trace");

  ServeArgs sv;
  auto* c_serve = app.add_subcommand("serve", "HTTP session service");
  with_config(c_serve);
  add_model_options(c_serve, sv.m);
  c_serve->add_option("--host", sv.host)->capture_default_str();
  c_serve->add_option("--port", sv.port)->envname("CRITIQ_PORT")->capture_default_str();
  c_serve->add_option("--with-ui", sv.ui, "Directory of static UI assets");
  c_serve->add_option("--top-n", sv.config.top_n)->capture_default_str();
  c_serve->add_option("--top-k", sv.config.top_k)->capture_default_str();
  c_serve->add_option("--ttl", sv.ttl, "Session idle timeout in seconds")->capture_default_str();

  LatencyArgs lat;
  auto* c_lat = app.add_subcommand("latency", "Time the single-critique path");
  with_config(c_lat);
  c_lat->add_option("--model", lat.m.model, "Checkpoint (random weights when absent)")
      ->envname("CRITIQ_MODEL");
  c_lat->add_option("--blender", lat.m.blender)->capture_default_str();
  c_lat->add_option("--critiques", lat.critiques)->capture_default_str();
  c_lat->add_option("--warmup", lat.warmup)->capture_default_str();
  c_lat->add_option("--latent-dim", lat.latent)->capture_default_str();
  c_lat->add_option("--items", lat.items)->capture_default_str();
  c_lat->add_option("--keyphrases", lat.keyphrases)->capture_default_str();
  c_lat->add_option("--seed", lat.seed)->capture_default_str();

  try {
    auto args = expand_config(app, argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  spdlog::set_default_logger(spdlog::stderr_color_mt("critiq"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*c_ingest) return run_ingest(ingest);
    if (*c_train) return run_train(tr, *c_train);
    if (*c_blend) return run_train_blender(bl, *c_blend);
    if (*c_eval) return run_evaluate(ev);
    if (*c_sim) return run_simulate(sim);
    if (*c_serve) return run_serve(sv);
    if (*c_lat) return run_latency(lat);
  } catch (const ResolutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& id : e.offenders()) std::cerr << "  unresolved: " << id << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
