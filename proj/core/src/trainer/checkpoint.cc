// Copyright (c) 2026 The DeepTalk Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deeptalk/trainer/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "deeptalk/common/require.h"
#include "deeptalk/common/tsv.h"

namespace deeptalk {

namespace {

constexpr uint32_t kFormatVersion = 1;

struct TensorEntry {
  std::string name;
  std::string dtype;
  std::vector<int> shape;
  size_t offset = 0;  // bytes into the payload

  int64_t Count() const {
    int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
  }
};

void AppendU32(std::string* out, uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff),
                         static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out->append(bytes, 4);
}

uint32_t ReadU32(const char* p) {
  return static_cast<uint32_t>(static_cast<unsigned char>(p[0])) |
         (static_cast<uint32_t>(static_cast<unsigned char>(p[1])) << 8) |
         (static_cast<uint32_t>(static_cast<unsigned char>(p[2])) << 16) |
         (static_cast<uint32_t>(static_cast<unsigned char>(p[3])) << 24);
}

class Writer {
 public:
  void AddU32(const std::string& name, const std::vector<int>& shape,
              const std::vector<uint32_t>& values) {
    AddHeader(name, "u32", shape, values.size());
    for (uint32_t v : values) AppendU32(&payload_, v);
  }

  void AddF32(const std::string& name, const std::vector<int>& shape,
              const double* data, int64_t count) {
    AddHeader(name, "f32", shape, count);
    for (int64_t i = 0; i < count; ++i) {
      AppendU32(&payload_,
                std::bit_cast<uint32_t>(static_cast<float>(data[i])));
    }
  }

  std::string Serialize() const { return manifest_ + "\n" + payload_; }

 private:
  void AddHeader(const std::string& name, const std::string& dtype,
                 const std::vector<int>& shape, size_t count) {
    int64_t declared = 1;
    std::string line = name + " " + dtype;
    for (int d : shape) {
      declared *= d;
      line += " " + std::to_string(d);
    }
    Require(declared == static_cast<int64_t>(count),
            "tensor " + name + ": shape does not match value count");
    manifest_ += line + "\n";
  }

  std::string manifest_;
  std::string payload_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    Require(in.good(), "cannot open checkpoint: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    const size_t sep = bytes.find("\n\n");
    Require(sep != std::string::npos,
            path + ": missing manifest/payload separator");
    const std::string manifest = bytes.substr(0, sep + 1);
    payload_ = bytes.substr(sep + 2);

    size_t offset = 0;
    std::istringstream lines(manifest);
    std::string line;
    while (std::getline(lines, line)) {
      Require(!line.empty(), path + ": blank line inside manifest");
      std::istringstream ls(line);
      TensorEntry e;
      ls >> e.name >> e.dtype;
      Require(!e.name.empty() && (e.dtype == "f32" || e.dtype == "u32"),
              path + ": bad manifest line: " + line);
      int d = 0;
      while (ls >> d) {
        Require(d >= 1, path + ": tensor " + e.name + ": bad dimension");
        e.shape.push_back(d);
      }
      Require(ls.eof(), path + ": bad manifest line: " + line);
      e.offset = offset;
      offset += static_cast<size_t>(e.Count()) * 4;
      Require(entries_.emplace(e.name, e).second,
              path + ": duplicate tensor " + e.name);
      order_.push_back(e.name);
    }
    Require(payload_.size() == offset,
            path + ": payload length mismatch: manifest declares " +
                std::to_string(offset) + " bytes, file has " +
                std::to_string(payload_.size()));
  }

  const TensorEntry& Entry(const std::string& name,
                           const std::string& dtype) const {
    auto it = entries_.find(name);
    Require(it != entries_.end(), path_ + ": checkpoint missing tensor " + name);
    Require(it->second.dtype == dtype,
            path_ + ": tensor " + name + ": expected dtype " + dtype);
    return it->second;
  }

  std::vector<uint32_t> GetU32(const std::string& name) {
    const TensorEntry& e = Entry(name, "u32");
    consumed_.insert(name);
    std::vector<uint32_t> values(e.Count());
    for (int64_t i = 0; i < e.Count(); ++i) {
      values[i] = ReadU32(payload_.data() + e.offset + 4 * i);
    }
    return values;
  }

  void GetF32(const std::string& name, const std::vector<int>& shape,
              double* out) {
    const TensorEntry& e = Entry(name, "f32");
    consumed_.insert(name);
    Require(e.shape == shape, [&] {
      std::string msg = path_ + ": parameter " + name + ": shape mismatch:";
      for (int d : e.shape) msg += " " + std::to_string(d);
      msg += " in checkpoint vs";
      for (int d : shape) msg += " " + std::to_string(d);
      msg += " in model";
      return msg;
    }());
    for (int64_t i = 0; i < e.Count(); ++i) {
      out[i] = static_cast<double>(std::bit_cast<float>(
          ReadU32(payload_.data() + e.offset + 4 * i)));
    }
  }

  bool Has(const std::string& name) const { return entries_.count(name) > 0; }

  void RequireAllConsumed() const {
    for (const std::string& name : order_) {
      Require(consumed_.count(name) > 0,
              path_ + ": unexpected tensor " + name);
    }
  }

 private:
  std::string path_;
  std::string payload_;
  std::map<std::string, TensorEntry> entries_;
  std::vector<std::string> order_;
  std::set<std::string> consumed_;
};

}  // namespace

void SaveCheckpoint(const std::string& path, EmbedderModel* model,
                    const AdamState* adam, const TrainState& state) {
  Writer w;
  const EmbedderOptions& o = model->opts;
  w.AddU32("meta.format", {1}, {kFormatVersion});
  w.AddU32("meta.framing", {2},
           {static_cast<uint32_t>(o.framing.window),
            static_cast<uint32_t>(o.framing.hop)});
  std::vector<uint32_t> fe;
  for (const Conv1dLayerSpec& s : o.frontend) {
    fe.push_back(s.kernel);
    fe.push_back(s.channels);
    fe.push_back(s.stride);
  }
  w.AddU32("meta.frontend", {static_cast<int>(o.frontend.size()), 3}, fe);
  std::vector<uint32_t> rc;
  for (const Conv2dLayerSpec& s : o.ref_conv) {
    rc.push_back(s.kernel);
    rc.push_back(s.channels);
    rc.push_back(s.stride);
  }
  w.AddU32("meta.ref_conv", {static_cast<int>(o.ref_conv.size()), 3}, rc);
  w.AddU32("meta.gru", {1}, {static_cast<uint32_t>(o.gru_hidden)});
  w.AddU32("meta.tokens", {1}, {static_cast<uint32_t>(o.num_tokens)});
  w.AddU32("meta.l2_normalize", {1}, {o.l2_normalize ? 1u : 0u});

  const std::vector<ParamRef> params = CollectParams(model);
  for (const ParamRef& p : params) {
    w.AddF32(p.name, p.shape, p.data, p.size);
  }

  w.AddU32("train.epoch", {1}, {state.epoch});
  w.AddU32("train.step", {1}, {state.step});
  w.AddU32("train.seed", {2},
           {static_cast<uint32_t>(state.seed & 0xffffffffu),
            static_cast<uint32_t>(state.seed >> 32)});

  if (adam != nullptr) {
    Require(adam->m.size() == params.size(),
            "optimizer state does not match the parameter set");
    Require(adam->t >= 0 && adam->t <= 0xffffffffLL,
            "optimizer step count out of range");
    w.AddU32("adam.t", {1}, {static_cast<uint32_t>(adam->t)});
    for (size_t i = 0; i < params.size(); ++i) {
      w.AddF32("adam.m." + params[i].name, params[i].shape,
               adam->m[i].data(), params[i].size);
      w.AddF32("adam.v." + params[i].name, params[i].shape,
               adam->v[i].data(), params[i].size);
    }
  }

  WriteTextFile(path, w.Serialize());
}

LoadedCheckpoint LoadCheckpoint(const std::string& path) {
  Reader r(path);
  const std::vector<uint32_t> version = r.GetU32("meta.format");
  Require(version.size() == 1 && version[0] == kFormatVersion,
          path + ": unsupported checkpoint format version");

  EmbedderOptions opts;
  const std::vector<uint32_t> framing = r.GetU32("meta.framing");
  Require(framing.size() == 2, path + ": bad meta.framing");
  opts.framing.window = static_cast<int>(framing[0]);
  opts.framing.hop = static_cast<int>(framing[1]);

  const std::vector<uint32_t> fe = r.GetU32("meta.frontend");
  Require(!fe.empty() && fe.size() % 3 == 0, path + ": bad meta.frontend");
  opts.frontend.clear();
  for (size_t i = 0; i < fe.size(); i += 3) {
    opts.frontend.push_back({static_cast<int>(fe[i]),
                             static_cast<int>(fe[i + 1]),
                             static_cast<int>(fe[i + 2])});
  }
  const std::vector<uint32_t> rc = r.GetU32("meta.ref_conv");
  Require(!rc.empty() && rc.size() % 3 == 0, path + ": bad meta.ref_conv");
  opts.ref_conv.clear();
  for (size_t i = 0; i < rc.size(); i += 3) {
    opts.ref_conv.push_back({static_cast<int>(rc[i]),
                             static_cast<int>(rc[i + 1]),
                             static_cast<int>(rc[i + 2])});
  }
  opts.gru_hidden = static_cast<int>(r.GetU32("meta.gru").at(0));
  opts.num_tokens = static_cast<int>(r.GetU32("meta.tokens").at(0));
  opts.l2_normalize = r.GetU32("meta.l2_normalize").at(0) != 0;

  LoadedCheckpoint loaded;
  loaded.model = InitEmbedder(opts, 0);
  const std::vector<ParamRef> params = CollectParams(&loaded.model);
  for (const ParamRef& p : params) {
    r.GetF32(p.name, p.shape, p.data);
  }

  loaded.state.epoch = r.GetU32("train.epoch").at(0);
  loaded.state.step = r.GetU32("train.step").at(0);
  const std::vector<uint32_t> seed = r.GetU32("train.seed");
  Require(seed.size() == 2, path + ": bad train.seed");
  loaded.state.seed =
      static_cast<uint64_t>(seed[0]) | (static_cast<uint64_t>(seed[1]) << 32);

  if (r.Has("adam.t")) {
    loaded.has_adam = true;
    loaded.adam = InitAdamState(params);
    loaded.adam.t = static_cast<int64_t>(r.GetU32("adam.t").at(0));
    for (size_t i = 0; i < params.size(); ++i) {
      r.GetF32("adam.m." + params[i].name, params[i].shape,
               loaded.adam.m[i].data());
      r.GetF32("adam.v." + params[i].name, params[i].shape,
               loaded.adam.v[i].data());
    }
  }
  r.RequireAllConsumed();
  return loaded;
}

}  // namespace deeptalk
