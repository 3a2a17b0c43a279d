/*
 * Copyright 2026 The AgroSense Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "agrosense/artifact.hpp"

#include <bit>
#include <cstring>
#include <limits>
#include <map>
#include <string>

#include <zlib.h>

#include "agrosense/error.hpp"
#include "agrosense/image.hpp"

namespace agro {

namespace {

using Bytes = std::vector<std::uint8_t>;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void reals(std::span<const double> v) {
    u64(v.size());
    for (double x : v) f64(x);
  }
  void sizes(std::span<const std::size_t> v) {
    u64(v.size());
    for (auto x : v) u64(x);
  }
  Bytes& bytes() { return out_; }

 private:
  Bytes out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> in, std::string section) : in_(in), section_(std::move(section)) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t count(std::size_t element_bytes) {
    const std::uint64_t n = u64();
    if (element_bytes && n > remaining() / element_bytes) fail("length field exceeds payload");
    return static_cast<std::size_t>(n);
  }
  std::string str() {
    const auto n = count(1);
    auto b = take(n);
    return {b.begin(), b.end()};
  }
  std::vector<double> reals() {
    std::vector<double> v(count(8));
    for (auto& x : v) x = f64();
    return v;
  }
  std::vector<std::size_t> sizes() {
    std::vector<std::size_t> v(count(8));
    for (auto& x : v) x = u64();
    return v;
  }
  bool boolean() {
    const auto v = u8();
    if (v > 1) fail("invalid boolean");
    return v == 1;
  }
  template <typename E>
  E enumeration(int max) {
    const auto v = u8();
    if (v > max) fail("invalid enum value");
    return static_cast<E>(v);
  }
  std::size_t remaining() const { return in_.size() - pos_; }
  void finish() const {
    if (pos_ != in_.size()) fail("trailing bytes");
  }
  [[noreturn]] void fail(const std::string& why) const {
    raise(ErrorCode::kCorruptArtifact, "artifact section '" + section_ + "': " + why);
  }

 private:
  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > remaining()) fail("truncated payload");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::span<const std::uint8_t> in_;
  std::string section_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks so very large payloads are safe.
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(bytes.size() - off, 1u << 30));
    crc = crc32(crc, bytes.data() + off, n);
    off += n;
  }
  return static_cast<std::uint32_t>(crc);
}

void write_policy(Writer& w, const AugmentPolicy& a) {
  w.f64(a.flip_probability);
  w.f64(a.max_rotation_deg);
  w.f64(a.brightness_min);
  w.f64(a.brightness_max);
  w.f64(a.zoom_min);
  w.f64(a.zoom_max);
  w.u64(a.seed);
}

AugmentPolicy read_policy(Reader& r) {
  AugmentPolicy a;
  a.flip_probability = r.f64();
  a.max_rotation_deg = r.f64();
  a.brightness_min = r.f64();
  a.brightness_max = r.f64();
  a.zoom_min = r.f64();
  a.zoom_max = r.f64();
  a.seed = r.u64();
  return a;
}

void write_network(Writer& w, const Network& net) {
  w.sizes(net.input_shape());
  w.u64(net.layers().size());
  for (const auto& l : net.layers()) {
    w.u8(static_cast<std::uint8_t>(l.kind));
    w.u64(l.units);
    w.u64(l.out_channels);
    w.u64(l.kernel_h);
    w.u64(l.kernel_w);
    w.u64(l.stride);
    w.u8(l.same_padding ? 1 : 0);
    w.u64(l.pool);
    w.u64(l.residual_from);
  }
  w.u64(net.parameters().size());
  for (const auto& t : net.parameters()) {
    w.sizes(t.shape);
    w.reals(t.data);
  }
}

Network read_network(Reader& r) {
  const Shape input = r.sizes();
  std::vector<LayerSpec> layers(r.count(8 * 7 + 2));
  for (auto& l : layers) {
    l.kind = r.enumeration<LayerKind>(static_cast<int>(LayerKind::kResidualAdd));
    l.units = r.u64();
    l.out_channels = r.u64();
    l.kernel_h = r.u64();
    l.kernel_w = r.u64();
    l.stride = r.u64();
    l.same_padding = r.boolean();
    l.pool = r.u64();
    l.residual_from = r.u64();
  }
  std::vector<Tensor> params(r.count(16));
  for (auto& t : params) {
    Shape s = r.sizes();
    auto d = r.reals();
    if (shape_size(s) != d.size()) r.fail("parameter tensor size disagrees with its shape");
    t = Tensor(std::move(s), std::move(d));
  }
  try {
    return Network(input, std::move(layers), std::move(params));
  } catch (const Error& e) {
    r.fail(std::string("network does not rebuild: ") + e.what());
  }
}

void write_vocab(Writer& w, const Vocabulary& v) {
  w.u64(v.size());
  for (const auto& n : v.names()) w.str(n);
}

Vocabulary read_vocab(Reader& r) {
  std::vector<std::string> names(r.count(8));
  for (auto& n : names) n = r.str();
  try {
    return Vocabulary(std::move(names));
  } catch (const Error& e) {
    r.fail(e.what());
  }
}

// Section tags in file order.
constexpr const char* kTags[] = {"META", "SCHM", "VOCB", "IMPT", "SCAL", "CNN ", "RECO"};

Bytes section_payload(const TrainedPipeline& p, std::string_view tag) {
  Writer w;
  if (tag == "META") {
    w.u64(p.seed);
    w.u8(static_cast<std::uint8_t>(p.fusion));
    w.f64(p.split.train);
    w.f64(p.split.val);
    w.f64(p.split.test);
    w.u64(p.image.height);
    w.u64(p.image.width);
    w.f64(p.feedback.threshold);
    w.u64(p.feedback.n_tta);
    w.u64(p.feedback.seed);
    write_policy(w, p.feedback.policy);
  } else if (tag == "SCHM") {
    w.u64(p.schema.size());
    for (const auto& f : p.schema) {
      w.str(f.name);
      w.str(f.unit);
    }
  } else if (tag == "VOCB") {
    write_vocab(w, p.soil_vocab);
    write_vocab(w, p.crop_vocab);
  } else if (tag == "IMPT") {
    w.u64(p.imputer.strategy.size());
    for (auto s : p.imputer.strategy) w.u8(static_cast<std::uint8_t>(s));
    w.reals(p.imputer.fill_values);
  } else if (tag == "SCAL") {
    w.u8(static_cast<std::uint8_t>(p.scaler.kind));
    w.reals(p.scaler.first);
    w.reals(p.scaler.second);
  } else if (tag == "CNN ") {
    w.u64(p.cnn_config.blocks.size());
    for (const auto& b : p.cnn_config.blocks) {
      w.u64(b.channels);
      w.u8(b.residual ? 1 : 0);
    }
    w.u64(p.cnn_config.head);
    w.u64(p.cnn_config.class_count);
    write_network(w, p.cnn);
  } else if (tag == "RECO") {
    const auto& m = p.recommender;
    w.u8(static_cast<std::uint8_t>(m.backend));
    w.u64(m.input_size);
    write_vocab(w, m.crop_vocab);
    if (m.backend == Backend::kMlp) {
      write_network(w, m.mlp);
    } else {
      const auto& g = m.gbdt;
      w.u64(g.class_count);
      w.u64(g.feature_count);
      w.f64(g.learning_rate);
      w.reals(g.base_score);
      w.u64(g.trees.size());
      for (const auto& t : g.trees) {
        w.u64(t.nodes.size());
        for (const auto& n : t.nodes) {
          w.u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(n.feature)));
          w.f64(n.threshold);
          w.u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(n.left)));
          w.u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(n.right)));
          w.f64(n.weight);
        }
      }
    }
  }
  return std::move(w.bytes());
}

int read_index(Reader& r) {
  const auto v = static_cast<std::int64_t>(r.u64());
  if (v < -1 || v > std::numeric_limits<int>::max()) r.fail("node index out of range");
  return static_cast<int>(v);
}

void parse_section(TrainedPipeline& p, std::string_view tag, Reader& r) {
  if (tag == "META") {
    p.seed = r.u64();
    p.fusion = r.enumeration<FusionMode>(static_cast<int>(FusionMode::kSoft));
    p.split.train = r.f64();
    p.split.val = r.f64();
    p.split.test = r.f64();
    p.image.height = r.u64();
    p.image.width = r.u64();
    p.feedback.threshold = r.f64();
    p.feedback.n_tta = r.u64();
    p.feedback.seed = r.u64();
    p.feedback.policy = read_policy(r);
  } else if (tag == "SCHM") {
    p.schema.resize(r.count(16));
    for (auto& f : p.schema) {
      f.name = r.str();
      f.unit = r.str();
    }
  } else if (tag == "VOCB") {
    p.soil_vocab = read_vocab(r);
    p.crop_vocab = read_vocab(r);
  } else if (tag == "IMPT") {
    p.imputer.strategy.resize(r.count(1));
    for (auto& s : p.imputer.strategy) s = r.enumeration<ImputeStrategy>(static_cast<int>(ImputeStrategy::kMedian));
    p.imputer.fill_values = r.reals();
  } else if (tag == "SCAL") {
    p.scaler.kind = r.enumeration<ScalerKind>(static_cast<int>(ScalerKind::kMinMax));
    p.scaler.first = r.reals();
    p.scaler.second = r.reals();
  } else if (tag == "CNN ") {
    p.cnn_config.blocks.resize(r.count(9));
    for (auto& b : p.cnn_config.blocks) {
      b.channels = r.u64();
      b.residual = r.boolean();
    }
    p.cnn_config.head = r.u64();
    p.cnn_config.class_count = r.u64();
    p.cnn = read_network(r);
  } else if (tag == "RECO") {
    auto& m = p.recommender;
    m.backend = r.enumeration<Backend>(static_cast<int>(Backend::kGbdt));
    m.input_size = r.u64();
    m.crop_vocab = read_vocab(r);
    if (m.backend == Backend::kMlp) {
      m.mlp = read_network(r);
    } else {
      auto& g = m.gbdt;
      g.class_count = r.u64();
      g.feature_count = r.u64();
      g.learning_rate = r.f64();
      g.base_score = r.reals();
      g.trees.resize(r.count(8));
      for (auto& t : g.trees) {
        t.nodes.resize(r.count(40));
        for (auto& n : t.nodes) {
          n.feature = read_index(r);
          n.threshold = r.f64();
          n.left = read_index(r);
          n.right = read_index(r);
          n.weight = r.f64();
        }
      }
    }
  }
  r.finish();
}

void check_consistency(const TrainedPipeline& p) {
  auto bad = [](const std::string& section, const std::string& why) {
    raise(ErrorCode::kCorruptArtifact, "artifact section '" + section + "': " + why);
  };
  const std::size_t m = p.schema.size();
  if (m == 0) bad("SCHM", "empty schema");
  if (p.imputer.fill_values.size() != m || p.imputer.strategy.size() != m) bad("IMPT", "width disagrees with schema");
  if (p.scaler.first.size() != m || p.scaler.second.size() != m) bad("SCAL", "width disagrees with schema");
  if (p.cnn.output_size() != p.soil_vocab.size()) bad("CNN ", "output size disagrees with soil vocabulary");
  if (p.cnn.input_shape() != Shape{3, p.image.height, p.image.width}) bad("CNN ", "input shape disagrees with image config");
  const auto& rec = p.recommender;
  if (!(rec.crop_vocab == p.crop_vocab)) bad("RECO", "crop vocabulary disagrees with VOCB");
  if (rec.input_size != m + p.soil_vocab.size()) bad("RECO", "input size disagrees with schema and soil vocabulary");
  if (rec.backend == Backend::kMlp) {
    if (rec.mlp.input_shape() != Shape{rec.input_size} || rec.mlp.output_size() != p.crop_vocab.size()) {
      bad("RECO", "network shape disagrees with vocabularies");
    }
  } else {
    const auto& g = rec.gbdt;
    if (g.class_count != p.crop_vocab.size() || g.feature_count != rec.input_size ||
        g.base_score.size() != g.class_count || (g.class_count && g.trees.size() % g.class_count != 0)) {
      bad("RECO", "tree ensemble shape disagrees with vocabularies");
    }
    for (const auto& t : g.trees) {
      const int n = static_cast<int>(t.nodes.size());
      if (n == 0) bad("RECO", "empty tree");
      for (int i = 0; i < n; ++i) {
        const auto& node = t.nodes[static_cast<std::size_t>(i)];
        if (node.is_leaf()) continue;
        // Preorder storage means children always follow their parent, so
        // this also rules out cycles.
        if (node.feature >= static_cast<int>(g.feature_count) || node.left <= i || node.right <= i || node.left >= n ||
            node.right >= n) {
          bad("RECO", "malformed tree node");
        }
      }
    }
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_pipeline(const TrainedPipeline& pipeline) {
  Writer w;
  for (char c : std::string_view("AGRO")) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kArtifactVersion);
  w.u32(static_cast<std::uint32_t>(std::size(kTags)));
  for (const char* tag : kTags) {
    const Bytes payload = section_payload(pipeline, tag);
    for (int i = 0; i < 4; ++i) w.u8(static_cast<std::uint8_t>(tag[i]));
    w.u64(payload.size());
    w.bytes().insert(w.bytes().end(), payload.begin(), payload.end());
    w.u32(crc_of(payload));
  }
  return std::move(w.bytes());
}

TrainedPipeline deserialize_pipeline(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "AGRO", 4) != 0) {
    raise(ErrorCode::kIncompatibleArtifact, "not a pipeline artifact (bad magic)");
  }
  Reader header(bytes.subspan(4), "header");
  const auto version = header.u32();
  if (version != kArtifactVersion) {
    raise(ErrorCode::kIncompatibleArtifact, "artifact format version " + std::to_string(version) +
                                                " is not supported (expected " + std::to_string(kArtifactVersion) + ")");
  }
  const auto count = header.u32();
  std::size_t pos = 12;
  std::map<std::string, std::span<const std::uint8_t>> sections;
  for (std::uint32_t s = 0; s < count; ++s) {
    if (bytes.size() - pos < 12) raise(ErrorCode::kCorruptArtifact, "artifact truncated in section table");
    const std::string tag(reinterpret_cast<const char*>(bytes.data() + pos), 4);
    Reader len(bytes.subspan(pos + 4, 8), tag);
    const auto n = len.u64();
    pos += 12;
    if (n > bytes.size() - pos || bytes.size() - pos - n < 4) {
      raise(ErrorCode::kCorruptArtifact, "artifact section '" + tag + "': truncated");
    }
    const auto payload = bytes.subspan(pos, n);
    Reader crc(bytes.subspan(pos + n, 4), tag);
    if (crc.u32() != crc_of(payload)) {
      raise(ErrorCode::kCorruptArtifact, "artifact section '" + tag + "': checksum mismatch");
    }
    if (!sections.emplace(tag, payload).second) {
      raise(ErrorCode::kCorruptArtifact, "artifact section '" + tag + "': duplicated");
    }
    pos += n + 4;
  }
  if (pos != bytes.size()) raise(ErrorCode::kCorruptArtifact, "artifact has trailing bytes after the last section");

  TrainedPipeline p;
  for (const char* tag : kTags) {
    auto it = sections.find(tag);
    if (it == sections.end()) raise(ErrorCode::kCorruptArtifact, "artifact section '" + std::string(tag) + "': missing");
    Reader r(it->second, tag);
    parse_section(p, tag, r);
  }
  check_consistency(p);
  return p;
}

void save_pipeline(const TrainedPipeline& pipeline, const std::filesystem::path& path) {
  write_bytes(path, serialize_pipeline(pipeline));
}

TrainedPipeline load_pipeline(const std::filesystem::path& path) { return deserialize_pipeline(read_bytes(path)); }

}  // namespace agro
