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

#include "critiq/model/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "critiq/error.hpp"

namespace critiq {
namespace {

constexpr char kMagic[] = "MMVAE1";
constexpr std::size_t kTagSize = 6;
constexpr std::uint32_t kMaxHeader = 64u << 20;

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

std::string hex(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

const char* kNetNames[] = {"enc_r", "enc_k", "dec_r", "dec_k"};
const char* kBlockNames[] = {"w1", "b1", "w2", "b2"};

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  template <typename U>
  void le(U v) {
    unsigned char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      buf[i] = static_cast<unsigned char>(v >> (8 * i));
    }
    bytes(buf, sizeof(U));
  }
  void header(const nlohmann::json& j) {
    const std::string text = j.dump();
    le<std::uint32_t>(static_cast<std::uint32_t>(text.size()));
    bytes(text.data(), text.size());
  }
  void tensors(const std::vector<NamedTensor>& ts) {
    for (const auto& t : ts) {
      le<std::uint64_t>(t.value.size());
      for (float f : t.value.values()) le<std::uint32_t>(std::bit_cast<std::uint32_t>(f));
    }
  }

 private:
  std::ofstream& out_;
};

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}

  bool at_end() const { return pos_ == data_.size(); }

  std::string take(std::size_t n, const char* what) {
    if (data_.size() - pos_ < n) {
      throw CheckpointError(std::string("checkpoint truncated while reading ") + what);
    }
    std::string out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  template <typename U>
  U le(const char* what) {
    const std::string raw = take(sizeof(U), what);
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<unsigned char>(raw[i])) << (8 * i);
    }
    return v;
  }
  nlohmann::json header(const char* what) {
    const auto n = le<std::uint32_t>(what);
    if (n > kMaxHeader) throw CheckpointError("checkpoint header too large");
    try {
      return nlohmann::json::parse(take(n, what));
    } catch (const nlohmann::json::exception& e) {
      throw CheckpointError(std::string("checkpoint header is not JSON: ") + e.what());
    }
  }
  std::vector<NamedTensor> tensors(const nlohmann::json& layout) {
    std::vector<NamedTensor> out;
    for (const auto& entry : layout) {
      const std::string name = entry.at("name");
      const std::size_t rows = entry.at("rows");
      const std::size_t cols = entry.at("cols");
      const auto count = le<std::uint64_t>(name.c_str());
      if (count != rows * cols) {
        throw CheckpointError("tensor " + name + " size disagrees with header");
      }
      if ((data_.size() - pos_) / 4 < count) {
        throw CheckpointError("checkpoint truncated in tensor " + name);
      }
      std::vector<float> values(count);
      for (auto& v : values) v = std::bit_cast<float>(le<std::uint32_t>(name.c_str()));
      out.push_back({name, Matrix<float>(rows, cols, std::move(values))});
    }
    return out;
  }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

nlohmann::json layout(const std::vector<NamedTensor>& ts) {
  auto arr = nlohmann::json::array();
  for (const auto& t : ts) {
    arr.push_back({{"name", t.name}, {"rows", t.value.rows()}, {"cols", t.value.cols()}});
  }
  return arr;
}

nlohmann::json dims_json(const ModelDims& d) {
  return {{"n_items", d.n_items},
          {"n_keyphrases", d.n_keyphrases},
          {"latent", d.latent},
          {"hidden", d.hidden}};
}

ModelDims dims_from_json(const nlohmann::json& j) {
  return {j.at("n_items"), j.at("n_keyphrases"), j.at("latent"), j.at("hidden")};
}

}  // namespace

const CheckpointSection* Checkpoint::section(const std::string& tag) const {
  for (const auto& s : sections) {
    if (s.tag == tag) return &s;
  }
  return nullptr;
}

nlohmann::json to_json(const TrainingConfig& c) {
  return {{"latent_dim", c.latent_dim},
          {"hidden_dim", c.hidden_dim},
          {"learning_rate", c.learning_rate},
          {"lambda", c.lambda},
          {"beta_target", c.beta_target},
          {"anneal_steps", c.anneal_steps},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"dropout", c.dropout},
          {"l2_weight", c.l2_weight},
          {"seed", c.seed},
          {"estimator",
           c.estimator == MixtureEstimator::kStratified ? "stratified" : "sample"}};
}

TrainingConfig training_config_from_json(const nlohmann::json& j) {
  TrainingConfig c;
  c.latent_dim = j.value("latent_dim", c.latent_dim);
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.lambda = j.value("lambda", c.lambda);
  c.beta_target = j.value("beta_target", c.beta_target);
  c.anneal_steps = j.value("anneal_steps", c.anneal_steps);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.dropout = j.value("dropout", c.dropout);
  c.l2_weight = j.value("l2_weight", c.l2_weight);
  c.seed = j.value("seed", c.seed);
  c.estimator = j.value("estimator", std::string("stratified")) == "sample"
                    ? MixtureEstimator::kSampleExpert
                    : MixtureEstimator::kStratified;
  return c;
}

std::string ids_digest(const Dataset& dataset) {
  std::uint64_t h = kFnvOffset;
  for (const IdMap* map : {&dataset.users, &dataset.items, &dataset.keyphrases}) {
    for (const auto& id : map->ids()) {
      fnv_bytes(h, id.data(), id.size());
      const char sep = '\n';
      fnv_bytes(h, &sep, 1);
    }
    const char group = '\x1e';
    fnv_bytes(h, &group, 1);
  }
  return hex(h);
}

std::string tensor_digest(const std::vector<NamedTensor>& tensors) {
  std::uint64_t h = kFnvOffset;
  for (const auto& t : tensors) {
    const auto v = t.value.values();
    fnv_bytes(h, v.data(), v.size() * sizeof(float));
  }
  return hex(h);
}

std::vector<NamedTensor> model_tensors(const MmvaeModel<float>& model) {
  const TwoLayerNet<float>* nets[] = {&model.enc_r, &model.enc_k, &model.dec_r,
                                      &model.dec_k};
  std::vector<NamedTensor> out;
  for (std::size_t n = 0; n < 4; ++n) {
    const auto blocks = nets[n]->blocks();
    for (std::size_t b = 0; b < 4; ++b) {
      out.push_back({std::string(kNetNames[n]) + "." + kBlockNames[b], *blocks[b]});
    }
  }
  return out;
}

std::string parameter_digest(const MmvaeModel<float>& model) {
  return tensor_digest(model_tensors(model));
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  Writer w(out);
  const auto tensors = model_tensors(ckpt.model);
  w.bytes(kMagic, kTagSize);
  w.header({{"version", ckpt.version},
            {"config", to_json(ckpt.config)},
            {"dims", dims_json(ckpt.model.dims())},
            {"ids_digest", ckpt.ids_digest},
            {"tensors", layout(tensors)},
            {"sections", ckpt.sections.size()}});
  w.tensors(tensors);
  for (const auto& s : ckpt.sections) {
    if (s.tag.size() != kTagSize) {
      throw ContractViolation("checkpoint section tag must be six bytes");
    }
    w.bytes(s.tag.data(), kTagSize);
    w.header({{"meta", s.header}, {"tensors", layout(s.tensors)}});
    w.tensors(s.tensors);
  }
  out.flush();
  if (!out) throw CheckpointError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const CheckpointExpectations& expect) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(data));

  if (r.take(kTagSize, "magic") != std::string(kMagic, kTagSize)) {
    throw CheckpointError("not a checkpoint: bad magic in " + path.string());
  }
  Checkpoint ckpt;
  std::size_t n_sections = 0;
  std::vector<NamedTensor> tensors;
  try {
    const auto head = r.header("header");
    ckpt.version = head.at("version");
    if (ckpt.version != kCheckpointVersion) {
      throw CheckpointError("unsupported checkpoint version " +
                            std::to_string(ckpt.version));
    }
    ckpt.config = training_config_from_json(head.at("config"));
    ckpt.dims = dims_from_json(head.at("dims"));
    ckpt.ids_digest = head.at("ids_digest");
    n_sections = head.at("sections");
    tensors = r.tensors(head.at("tensors"));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint header: ") + e.what());
  }

  if (expect.dims && *expect.dims != ckpt.dims) {
    throw CheckpointError("checkpoint dims do not match the expected model");
  }
  if (expect.ids_digest && *expect.ids_digest != ckpt.ids_digest) {
    throw CheckpointError("checkpoint id digest " + ckpt.ids_digest +
                          " does not match dataset digest " + *expect.ids_digest);
  }

  const auto& d = ckpt.dims;
  const std::size_t shapes[4][3] = {{d.n_items, d.hidden, 2 * d.latent},
                                    {d.n_keyphrases, d.hidden, 2 * d.latent},
                                    {d.latent, d.hidden, d.n_items},
                                    {d.latent, d.hidden, d.n_keyphrases}};
  if (tensors.size() != 16) throw CheckpointError("checkpoint must hold 16 model tensors");
  TwoLayerNet<float>* nets[] = {&ckpt.model.enc_r, &ckpt.model.enc_k,
                                &ckpt.model.dec_r, &ckpt.model.dec_k};
  for (std::size_t n = 0; n < 4; ++n) {
    *nets[n] = TwoLayerNet<float>(shapes[n][0], shapes[n][1], shapes[n][2]);
    auto blocks = nets[n]->mutable_blocks();
    for (std::size_t b = 0; b < 4; ++b) {
      auto& t = tensors[4 * n + b].value;
      if (t.rows() != blocks[b]->rows() || t.cols() != blocks[b]->cols()) {
        throw CheckpointError("tensor " + tensors[4 * n + b].name +
                              " has the wrong shape for the declared dims");
      }
      *blocks[b] = std::move(t);
    }
  }

  for (std::size_t s = 0; s < n_sections; ++s) {
    CheckpointSection section;
    section.tag = r.take(kTagSize, "section tag");
    try {
      const auto head = r.header("section header");
      section.header = head.at("meta");
      section.tensors = r.tensors(head.at("tensors"));
    } catch (const nlohmann::json::exception& e) {
      throw CheckpointError(std::string("malformed section header: ") + e.what());
    }
    ckpt.sections.push_back(std::move(section));
  }
  if (!r.at_end()) throw CheckpointError("trailing bytes after checkpoint");
  return ckpt;
}

}  // namespace critiq
