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
#include <cstring>
#include <fstream>

#include "agrosense/artifact.hpp"
#include "fixtures.hpp"
#include "support.hpp"

using namespace agro;
using agro::test::error_code_of;
using agro::test::error_message_of;

namespace {

using Bytes = std::vector<std::uint8_t>;

struct Trained {
  Dataset ds;
  SplitAssignment split;
  TrainedPipeline mlp;
  TrainedPipeline gbdt;
};

const Trained& trained() {
  static const Trained t = [] {
    Trained out;
    out.ds = agro::test::small_dataset(20);
    auto cfg = agro::test::small_config(5);
    cfg.soil.train.epochs = 3;
    cfg.recommender.mlp.train.epochs = 20;
    out.split = pipeline_split(out.ds, cfg.split, cfg.seed);
    out.mlp = train_pipeline(out.ds, out.split, cfg).pipeline;
    cfg.recommender.backend = Backend::kGbdt;
    cfg.recommender.gbdt.rounds = 8;
    cfg.fusion = FusionMode::kSoft;
    out.gbdt = train_pipeline(out.ds, out.split, cfg).pipeline;
    return out;
  }();
  return t;
}

// Bitwise reflected CRC-32 (polynomial 0xEDB88320), independent of zlib.
std::uint32_t crc32_reference(const std::uint8_t* p, std::size_t n) {
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < n; ++i) {
    c ^= p[i];
    for (int k = 0; k < 8; ++k) c = (c >> 1) ^ (0xEDB88320u & (0u - (c & 1u)));
  }
  return ~c;
}

std::uint64_t le(const Bytes& b, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
  return v;
}

struct SectionSpan {
  std::string tag;
  std::size_t payload;  // offset of the first payload byte
  std::size_t length;
};

std::vector<SectionSpan> walk(const Bytes& b) {
  std::vector<SectionSpan> out;
  std::size_t pos = 12;
  for (std::uint64_t s = 0; s < le(b, 8, 4); ++s) {
    SectionSpan span{std::string(reinterpret_cast<const char*>(&b[pos]), 4), pos + 12,
                     static_cast<std::size_t>(le(b, pos + 4, 8))};
    out.push_back(span);
    pos = span.payload + span.length + 4;
  }
  REQUIRE(pos == b.size());
  return out;
}

void same_predictions(const TrainedPipeline& a, const TrainedPipeline& b, const Trained& t) {
  for (auto i : t.split.test) {
    const auto& s = t.ds.samples[i];
    CHECK(predict_pipeline(a, s.image, s.profile) == predict_pipeline(b, s.image, s.profile));
  }
}

}  // namespace

TEST_CASE("layout: header, tag order and checksums") {
  const auto bytes = serialize_pipeline(trained().mlp);
  CHECK(std::memcmp(bytes.data(), "AGRO", 4) == 0);
  CHECK(le(bytes, 4, 4) == kArtifactVersion);
  const auto sections = walk(bytes);
  std::vector<std::string> tags;
  for (const auto& s : sections) {
    tags.push_back(s.tag);
    CHECK(le(bytes, s.payload + s.length, 4) == crc32_reference(&bytes[s.payload], s.length));
  }
  CHECK(tags == std::vector<std::string>{"META", "SCHM", "VOCB", "IMPT", "SCAL", "CNN ", "RECO"});
}

TEST_CASE("round trip reproduces predictions bit for bit") {
  const auto& t = trained();
  for (const auto* p : {&t.mlp, &t.gbdt}) {
    const auto bytes = serialize_pipeline(*p);
    const auto back = deserialize_pipeline(bytes);
    CHECK(serialize_pipeline(back) == bytes);
    CHECK(back.recommender.backend == p->recommender.backend);
    CHECK(back.fusion == p->fusion);
    same_predictions(*p, back, t);
  }
}

TEST_CASE("save and load through the filesystem") {
  const auto& t = trained();
  agro::test::TempDir dir("artifact");
  save_pipeline(t.gbdt, dir / "model.agro");
  same_predictions(t.gbdt, load_pipeline(dir / "model.agro"), t);
  CHECK(error_code_of([&] { load_pipeline(dir / "absent.agro"); }) == ErrorCode::kFilesystem);
}

TEST_CASE("a flipped payload byte names its section") {
  const auto bytes = serialize_pipeline(trained().mlp);
  for (const auto& s : walk(bytes)) {
    CAPTURE(s.tag);
    REQUIRE(s.length > 0);
    auto bad = bytes;
    bad[s.payload + s.length / 2] ^= 0x10;
    CHECK(error_code_of([&] { deserialize_pipeline(bad); }) == ErrorCode::kCorruptArtifact);
    CHECK(error_message_of([&] { deserialize_pipeline(bad); }).find("'" + s.tag + "'") != std::string::npos);
  }
}

TEST_CASE("version and magic mismatches are incompatible") {
  auto bytes = serialize_pipeline(trained().mlp);
  auto newer = bytes;
  newer[4] = static_cast<std::uint8_t>(kArtifactVersion + 1);
  CHECK(error_code_of([&] { deserialize_pipeline(newer); }) == ErrorCode::kIncompatibleArtifact);
  CHECK(error_message_of([&] { deserialize_pipeline(newer); }).find("version 2") != std::string::npos);
  bytes[0] = 'X';
  CHECK(error_code_of([&] { deserialize_pipeline(bytes); }) == ErrorCode::kIncompatibleArtifact);
}

TEST_CASE("truncation and trailing bytes are corrupt") {
  const auto bytes = serialize_pipeline(trained().mlp);
  for (std::size_t keep : {std::size_t{12}, std::size_t{30}, bytes.size() / 2, bytes.size() - 1}) {
    CAPTURE(keep);
    const Bytes cut(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(keep));
    CHECK(error_code_of([&] { deserialize_pipeline(cut); }) == ErrorCode::kCorruptArtifact);
  }
  auto longer = bytes;
  longer.push_back(0);
  CHECK(error_code_of([&] { deserialize_pipeline(longer); }) == ErrorCode::kCorruptArtifact);
}

TEST_CASE("a valid checksum does not hide a short section") {
  const auto bytes = serialize_pipeline(trained().mlp);
  // Drop the last META byte and fix up both the length field and the CRC.
  for (const auto& s : walk(bytes)) {
    if (s.tag != "META") continue;
    auto bad = bytes;
    Bytes payload(bad.begin() + static_cast<std::ptrdiff_t>(s.payload),
                  bad.begin() + static_cast<std::ptrdiff_t>(s.payload + s.length - 1));
    Bytes rebuilt(bad.begin(), bad.begin() + static_cast<std::ptrdiff_t>(s.payload - 8));
    for (int i = 0; i < 8; ++i) rebuilt.push_back(static_cast<std::uint8_t>((s.length - 1) >> (8 * i)));
    rebuilt.insert(rebuilt.end(), payload.begin(), payload.end());
    const auto crc = crc32_reference(payload.data(), payload.size());
    for (int i = 0; i < 4; ++i) rebuilt.push_back(static_cast<std::uint8_t>(crc >> (8 * i)));
    rebuilt.insert(rebuilt.end(), bad.begin() + static_cast<std::ptrdiff_t>(s.payload + s.length + 4), bad.end());
    CHECK(error_code_of([&] { deserialize_pipeline(rebuilt); }) == ErrorCode::kCorruptArtifact);
    CHECK(error_message_of([&] { deserialize_pipeline(rebuilt); }).find("'META'") != std::string::npos);
  }
}
