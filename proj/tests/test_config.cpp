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
#include <cstdlib>
#include <fstream>

#include "agrosense/config.hpp"
#include "support.hpp"

using namespace agro;
using agro::test::error_code_of;
using agro::test::error_message_of;

namespace {

// Sets or clears AGROSENSE_SEED for the lifetime of the guard.
class EnvSeed {
 public:
  explicit EnvSeed(const char* value) {
    if (value) {
      setenv("AGROSENSE_SEED", value, 1);
    } else {
      unsetenv("AGROSENSE_SEED");
    }
  }
  ~EnvSeed() { unsetenv("AGROSENSE_SEED"); }
};

}  // namespace

TEST_CASE("empty config keeps defaults") {
  const auto rc = parse_run_config("{}");
  CHECK(rc.pipeline.seed == 42);
  CHECK(rc.pipeline.soil.image.height == 32);
  CHECK(rc.pipeline.soil.train.epochs == 15);
  CHECK(rc.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(rc.pipeline.soil.train.seed == derive_seed(42, {1}));
}

TEST_CASE("values reach the pipeline config") {
  const auto rc = parse_run_config(R"({
    "seed": 7, "image": {"size": 24},
    "cnn": {"blocks": [4, 8, 8], "residual": true, "epochs": 3, "optimizer": "sgd", "lr": 0.05},
    "recommender": {"backend": "gbdt", "kfold": 5},
    "gbdt": {"rounds": 12, "max_depth": 2},
    "fusion": {"mode": "soft", "threshold": 0.7},
    "split": {"train": 0.6, "val": 0.2, "test": 0.2},
    "seeds": [10, 11], "paths": {"data": "d", "out": "o"}})");
  const auto& p = rc.pipeline;
  CHECK(p.seed == 7);
  CHECK(p.recommender.seed == derive_seed(7, {3}));
  CHECK(p.soil.image.width == 24);
  REQUIRE(p.cnn.blocks.size() == 3);
  CHECK(p.cnn.blocks[2].channels == 8);
  CHECK(p.cnn.blocks[0].residual);
  CHECK(p.soil.train.epochs == 3);
  CHECK(p.soil.train.optimizer.kind == OptimizerKind::kSgdMomentum);
  CHECK(p.soil.train.optimizer.lr == 0.05);
  CHECK(p.recommender.backend == Backend::kGbdt);
  CHECK(p.recommender.kfold == 5);
  CHECK(p.recommender.gbdt.rounds == 12);
  CHECK(p.fusion == FusionMode::kSoft);
  CHECK(p.feedback.threshold == 0.7);
  CHECK(p.split.val == 0.2);
  CHECK(rc.seeds == std::vector<std::uint64_t>{10, 11});
  CHECK(rc.data_path == "d");
  CHECK(rc.out_path == "o");
}

TEST_CASE("config errors name the key path") {
  struct Case {
    const char* text;
    const char* key;
  };
  const Case cases[] = {
      {R"({"bogus": 1})", "'bogus'"},
      {R"({"cnn": {"lr": 5}})", "'cnn.lr'"},
      {R"({"cnn": {"widths": [1]}})", "'cnn.widths'"},
      {R"({"image": {"size": 4}})", "'image.size'"},
      {R"({"gbdt": {"max_depth": -1}})", "'gbdt.max_depth'"},
      {R"({"fusion": {"mode": "average"}})", "'fusion.mode'"},
      {R"({"recommender": {"kfold": 1}})", "'recommender.kfold'"},
      {R"({"split": {"train": 0.5}})", "'split'"},
      {R"({"augment": {"zoom": [1.2, 0.9]}})", "'augment.zoom'"},
      {R"({"seed": "x"})", "'seed'"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    CHECK(error_code_of([&] { parse_run_config(c.text); }) == ErrorCode::kConfig);
    CHECK(error_message_of([&] { parse_run_config(c.text); }).find(c.key) != std::string::npos);
  }
  CHECK(error_code_of([] { parse_run_config("{not json"); }) == ErrorCode::kConfig);
  CHECK(error_code_of([] { parse_run_config("[1]"); }) == ErrorCode::kConfig);
}

TEST_CASE("json round trip is a fixed point") {
  const auto rc = parse_run_config(R"({"seed": 3, "cnn": {"blocks": [4], "head": 16}, "seeds": [1, 9]})");
  const auto text = run_config_to_json(rc);
  const auto back = parse_run_config(text);
  CHECK(run_config_to_json(back) == text);
  CHECK(back.pipeline.cnn.head == 16);
  CHECK(back.pipeline.soil.train.seed == rc.pipeline.soil.train.seed);
}

TEST_CASE("load_run_config reads a file") {
  agro::test::TempDir dir("config");
  std::ofstream(dir / "c.json") << R"({"seed": 5})";
  CHECK(load_run_config((dir / "c.json").string()).pipeline.seed == 5);
  CHECK(error_code_of([&] { load_run_config((dir / "missing.json").string()); }) == ErrorCode::kFilesystem);
}

TEST_CASE("seed precedence: flag, then environment, then config") {
  const std::uint64_t flag = 11;
  {
    EnvSeed env(nullptr);
    CHECK(resolve_seed(nullptr, 42) == 42);
    CHECK(resolve_seed(&flag, 42) == 11);
  }
  {
    EnvSeed env("77");
    CHECK(resolve_seed(nullptr, 42) == 77);
    CHECK(resolve_seed(&flag, 42) == 11);
  }
  {
    EnvSeed env("-3");
    CHECK(error_code_of([] { resolve_seed(nullptr, 42); }) == ErrorCode::kConfig);
  }
  {
    EnvSeed env("12abc");
    CHECK(error_code_of([] { resolve_seed(nullptr, 42); }) == ErrorCode::kConfig);
  }
}
