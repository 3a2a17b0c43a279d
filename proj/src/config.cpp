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
#include "agrosense/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "agrosense/error.hpp"
#include "json.hpp"

namespace agro {

namespace {

using nlohmann::json;

// Reads keys out of one JSON object, rejecting any key it was never asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "run config" : path_, "must be a JSON object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) fail(where(key), "unknown key");
    }
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void real(const std::string& key, double& out, double lo, double hi) {
    if (const json* v = get(key)) {
      if (!v->is_number()) fail(where(key), "must be a number");
      const double x = v->get<double>();
      if (!(x >= lo && x <= hi)) fail(where(key), "out of range [" + num(lo) + ", " + num(hi) + "]");
      out = x;
    }
  }

  template <typename T>
  void integer(const std::string& key, T& out, std::uint64_t lo, std::uint64_t hi) {
    if (const json* v = get(key)) out = static_cast<T>(as_uint(*v, where(key), lo, hi));
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean()) fail(where(key), "must be true or false");
      out = v->get<bool>();
    }
  }

  // Returns the chosen index into `choices`, or -1 when the key is absent.
  int choice(const std::string& key, std::initializer_list<const char*> choices) {
    const json* v = get(key);
    if (!v) return -1;
    if (v->is_string()) {
      int i = 0;
      for (const char* c : choices) {
        if (v->get<std::string>() == c) return i;
        ++i;
      }
    }
    std::string list;
    for (const char* c : choices) list += (list.empty() ? "" : ", ") + std::string(c);
    fail(where(key), "must be one of: " + list);
  }

  [[noreturn]] static void fail(const std::string& key, const std::string& what) {
    raise(ErrorCode::kConfig, "config key '" + key + "': " + what);
  }

  static std::uint64_t as_uint(const json& v, const std::string& key, std::uint64_t lo, std::uint64_t hi) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(key, "must be a non-negative integer");
    }
    const auto x = v.get<std::uint64_t>();
    if (x < lo || x > hi) fail(key, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  static std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

constexpr std::uint64_t kMaxSeed = ~0ULL;

void read_optimizer(Section& s, OptimizerConfig& opt) {
  const int kind = s.choice("optimizer", {"adam", "sgd"});
  if (kind == 0) opt.kind = OptimizerKind::kAdam;
  if (kind == 1) opt.kind = OptimizerKind::kSgdMomentum;
  s.real("lr", opt.lr, 1e-6, 1.0);
  s.real("momentum", opt.momentum, 0.0, 0.999999);
}

void read_range(Section& s, const std::string& key, double& lo, double& hi, double min, double max) {
  const json* v = s.get(key);
  if (!v) return;
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
    Section::fail(s.where(key), "must be a [low, high] pair");
  }
  const double a = (*v)[0].get<double>(), b = (*v)[1].get<double>();
  if (!(a >= min && b <= max && a <= b)) {
    Section::fail(s.where(key), "must satisfy " + Section::num(min) + " <= low <= high <= " + Section::num(max));
  }
  lo = a;
  hi = b;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  const json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) raise(ErrorCode::kConfig, "run config is not valid JSON");
  RunConfig rc;
  auto& p = rc.pipeline;
  std::uint64_t seed = p.seed;
  {
    Section top(root, "");
    top.integer("seed", seed, 0, kMaxSeed);

    if (const json* j = top.get("image")) {
      Section s(*j, "image");
      std::size_t size = p.soil.image.height;
      s.integer("size", size, 8, 512);
      p.soil.image.height = p.soil.image.width = size;
    }
    if (const json* j = top.get("preprocess")) {
      Section s(*j, "preprocess");
      if (int c = s.choice("impute", {"mean", "median"}); c >= 0) {
        p.impute = c == 0 ? ImputeStrategy::kMean : ImputeStrategy::kMedian;
      }
      if (int c = s.choice("scaler", {"zscore", "minmax"}); c >= 0) {
        p.scaler = c == 0 ? ScalerKind::kZScore : ScalerKind::kMinMax;
      }
    }
    if (const json* j = top.get("cnn")) {
      Section s(*j, "cnn");
      bool residual = false;
      s.boolean("residual", residual);
      if (const json* b = s.get("blocks")) {
        if (!b->is_array() || b->empty() || b->size() > 4) Section::fail("cnn.blocks", "must be a list of 1 to 4 widths");
        p.cnn.blocks.clear();
        for (const auto& w : *b) p.cnn.blocks.push_back({Section::as_uint(w, "cnn.blocks", 1, 256), false});
      }
      for (auto& block : p.cnn.blocks) block.residual = residual;
      s.integer("head", p.cnn.head, 1, 4096);
      s.integer("epochs", p.soil.train.epochs, 1, 10000);
      s.integer("batch_size", p.soil.train.batch_size, 1, 4096);
      read_optimizer(s, p.soil.train.optimizer);
      s.boolean("augment", p.soil.augment);
    }
    if (const json* j = top.get("augment")) {
      Section s(*j, "augment");
      AugmentPolicy& a = p.soil.policy;
      s.real("flip_probability", a.flip_probability, 0.0, 1.0);
      s.real("max_rotation_deg", a.max_rotation_deg, 0.0, 180.0);
      read_range(s, "brightness", a.brightness_min, a.brightness_max, 0.0, 10.0);
      read_range(s, "zoom", a.zoom_min, a.zoom_max, 0.1, 10.0);
      p.feedback.policy = a;
    }
    if (const json* j = top.get("scheduler")) {
      Section s(*j, "scheduler");
      SchedulerConfig sc = p.soil.train.scheduler;
      s.real("factor", sc.factor, 1e-6, 0.999999);
      s.integer("patience", sc.patience, 0, 10000);
      s.real("min_delta", sc.min_delta, 0.0, 1e6);
      s.real("min_lr", sc.min_lr, 0.0, 1.0);
      p.soil.train.scheduler = sc;
      p.recommender.mlp.train.scheduler = sc;
    }
    if (const json* j = top.get("recommender")) {
      Section s(*j, "recommender");
      if (int c = s.choice("backend", {"mlp", "gbdt"}); c >= 0) p.recommender.backend = c == 0 ? Backend::kMlp : Backend::kGbdt;
      s.integer("hidden", p.recommender.mlp.hidden, 1, 4096);
      s.integer("epochs", p.recommender.mlp.train.epochs, 1, 10000);
      s.integer("batch_size", p.recommender.mlp.train.batch_size, 1, 4096);
      read_optimizer(s, p.recommender.mlp.train.optimizer);
      s.integer("kfold", p.recommender.kfold, 0, 100);
      if (p.recommender.kfold == 1) Section::fail("recommender.kfold", "must be 0 (disabled) or at least 2");
    }
    if (const json* j = top.get("gbdt")) {
      Section s(*j, "gbdt");
      GbdtParams& g = p.recommender.gbdt;
      s.integer("rounds", g.rounds, 1, 10000);
      s.real("learning_rate", g.learning_rate, 1e-6, 1.0);
      s.integer("max_depth", g.max_depth, 1, 16);
      s.real("lambda", g.lambda, 0.0, 1e6);
      s.real("gamma", g.gamma, 0.0, 1e6);
      s.real("min_child_hessian", g.min_child_hessian, 0.0, 1e6);
    }
    if (const json* j = top.get("fusion")) {
      Section s(*j, "fusion");
      if (int c = s.choice("mode", {"hard", "soft"}); c >= 0) p.fusion = c == 0 ? FusionMode::kHard : FusionMode::kSoft;
      s.real("threshold", p.feedback.threshold, 0.0, 1.0);
      s.integer("n_tta", p.feedback.n_tta, 1, 256);
    }
    if (const json* j = top.get("split")) {
      Section s(*j, "split");
      s.real("train", p.split.train, 0.0, 1.0);
      s.real("val", p.split.val, 0.0, 1.0);
      s.real("test", p.split.test, 0.0, 1.0);
      if (std::abs(p.split.train + p.split.val + p.split.test - 1.0) > 1e-9 || p.split.train <= 0.0) {
        Section::fail("split", "ratios must sum to 1 with a positive train share");
      }
    }
    if (const json* j = top.get("seeds")) {
      if (!j->is_array()) Section::fail("seeds", "must be a list of integers");
      rc.seeds.clear();
      for (const auto& v : *j) rc.seeds.push_back(Section::as_uint(v, "seeds", 0, kMaxSeed));
    }
    if (const json* j = top.get("paths")) {
      Section s(*j, "paths");
      for (auto [key, dst] : {std::pair{"data", &rc.data_path}, std::pair{"out", &rc.out_path}}) {
        if (const json* v = s.get(key)) {
          if (!v->is_string()) Section::fail(s.where(key), "must be a string");
          *dst = v->get<std::string>();
        }
      }
    }
  }
  apply_seed(p, seed);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kFilesystem, "cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_run_config(os.str());
}

std::string run_config_to_json(const RunConfig& rc) {
  const auto& p = rc.pipeline;
  auto opt = [](const OptimizerConfig& o) {
    return std::pair{o.kind == OptimizerKind::kAdam ? "adam" : "sgd", o};
  };
  nlohmann::ordered_json j;
  j["seed"] = p.seed;
  j["image"] = {{"size", p.soil.image.height}};
  j["preprocess"] = {{"impute", p.impute == ImputeStrategy::kMean ? "mean" : "median"},
                     {"scaler", p.scaler == ScalerKind::kZScore ? "zscore" : "minmax"}};
  std::vector<std::size_t> widths;
  for (const auto& b : p.cnn.blocks) widths.push_back(b.channels);
  const auto [cnn_kind, cnn_opt] = opt(p.soil.train.optimizer);
  j["cnn"] = {{"blocks", widths},
              {"residual", !p.cnn.blocks.empty() && p.cnn.blocks[0].residual},
              {"head", p.cnn.head},
              {"epochs", p.soil.train.epochs},
              {"batch_size", p.soil.train.batch_size},
              {"optimizer", cnn_kind},
              {"lr", cnn_opt.lr},
              {"momentum", cnn_opt.momentum},
              {"augment", p.soil.augment}};
  const auto& a = p.soil.policy;
  j["augment"] = {{"flip_probability", a.flip_probability},
                  {"max_rotation_deg", a.max_rotation_deg},
                  {"brightness", {a.brightness_min, a.brightness_max}},
                  {"zoom", {a.zoom_min, a.zoom_max}}};
  const auto& sc = p.soil.train.scheduler;
  j["scheduler"] = {{"factor", sc.factor}, {"patience", sc.patience}, {"min_delta", sc.min_delta}, {"min_lr", sc.min_lr}};
  const auto [rec_kind, rec_opt] = opt(p.recommender.mlp.train.optimizer);
  j["recommender"] = {{"backend", p.recommender.backend == Backend::kMlp ? "mlp" : "gbdt"},
                      {"hidden", p.recommender.mlp.hidden},
                      {"epochs", p.recommender.mlp.train.epochs},
                      {"batch_size", p.recommender.mlp.train.batch_size},
                      {"optimizer", rec_kind},
                      {"lr", rec_opt.lr},
                      {"momentum", rec_opt.momentum},
                      {"kfold", p.recommender.kfold}};
  const auto& g = p.recommender.gbdt;
  j["gbdt"] = {{"rounds", g.rounds},       {"learning_rate", g.learning_rate}, {"max_depth", g.max_depth},
               {"lambda", g.lambda},       {"gamma", g.gamma},                 {"min_child_hessian", g.min_child_hessian}};
  j["fusion"] = {{"mode", p.fusion == FusionMode::kHard ? "hard" : "soft"},
                 {"threshold", p.feedback.threshold},
                 {"n_tta", p.feedback.n_tta}};
  j["split"] = {{"train", p.split.train}, {"val", p.split.val}, {"test", p.split.test}};
  j["seeds"] = rc.seeds;
  j["paths"] = {{"data", rc.data_path}, {"out", rc.out_path}};
  return j.dump(2);
}

std::uint64_t resolve_seed(const std::uint64_t* flag, std::uint64_t config_seed) {
  if (flag) return *flag;
  if (const char* env = std::getenv("AGROSENSE_SEED"); env && *env) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || errno != 0 || *env == '-') {
      raise(ErrorCode::kConfig, "AGROSENSE_SEED must be a non-negative integer, got '" + std::string(env) + "'");
    }
    return v;
  }
  return config_seed;
}

}  // namespace agro
