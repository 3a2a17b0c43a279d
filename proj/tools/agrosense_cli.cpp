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
// agrosense: command-line front end over the C API.
//
// Exit status: 0 on success, 2 on usage errors, 1 on runtime errors.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "agrosense/agrosense.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuntimeError : std::runtime_error {
  explicit RuntimeError(std::string msg, agro_status s) : std::runtime_error(std::move(msg)), status(s) {}
  agro_status status;
};

void check(agro_status s) {
  if (s == AGRO_OK) return;
  std::string msg = std::string(agro_status_name(s)) + " error: " + agro_last_error();
  if (s == AGRO_ERR_USAGE) throw UsageError(agro_last_error());
  throw RuntimeError(msg, s);
}

// Owns a string returned by the library.
struct CString {
  char* p = nullptr;
  ~CString() { agro_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Pipeline {
  agro_pipeline* p = nullptr;
  ~Pipeline() { agro_pipeline_free(p); }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("cannot read " + path, AGRO_ERR_FILESYSTEM);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw RuntimeError("cannot write " + path, AGRO_ERR_FILESYSTEM);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

struct Nutrients {
  std::vector<double> values;
  std::vector<unsigned char> missing;
};

// Empty, "na" and "nan" cells mark the value as missing so it is imputed.
void parse_value(const std::string& feature, const std::string& text, Nutrients& n, std::size_t i) {
  const std::string t = lower(text);
  if (t.empty() || t == "na" || t == "nan") {
    n.missing[i] = 1;
    return;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("nutrient '" + feature + "' has a non-numeric value '" + text + "'");
  }
  n.values[i] = v;
}

Nutrients parse_named(const std::vector<std::string>& names, const std::vector<std::string>& keys,
                      const std::vector<std::string>& vals) {
  Nutrients n{std::vector<double>(names.size(), 0.0), std::vector<unsigned char>(names.size(), 0)};
  std::vector<bool> seen(names.size(), false);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const auto it = std::find_if(names.begin(), names.end(), [&](const std::string& f) { return lower(f) == lower(keys[k]); });
    if (it == names.end()) {
      if (lower(keys[k]) == "id" || lower(keys[k]) == "label" || lower(keys[k]) == "crop" ||
          lower(keys[k]) == "soil_class" || lower(keys[k]) == "soil") {
        continue;
      }
      throw UsageError("unknown nutrient feature '" + keys[k] + "'");
    }
    const auto i = static_cast<std::size_t>(it - names.begin());
    if (seen[i]) throw UsageError("nutrient feature '" + names[i] + "' given twice");
    seen[i] = true;
    parse_value(names[i], vals[k], n, i);
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!seen[i]) throw UsageError("missing nutrient feature '" + names[i] + "'");
  }
  return n;
}

// Accepts inline "N=90,P=42,..." pairs, a bare CSV row in schema order, or a
// path to a CSV file whose header names the features (first data row used).
Nutrients parse_nutrients(const std::string& arg, const std::vector<std::string>& names) {
  if (arg.find('=') != std::string::npos) {
    std::vector<std::string> keys, vals;
    for (const auto& item : split_commas(arg)) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("inline nutrient item '" + item + "' is not of the form NAME=VALUE");
      keys.push_back(trim(item.substr(0, eq)));
      vals.push_back(trim(item.substr(eq + 1)));
    }
    return parse_named(names, keys, vals);
  }
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::istringstream in(read_text(arg));
    std::string header, row;
    std::getline(in, header);
    while (std::getline(in, row) && trim(row).empty()) {
    }
    if (trim(row).empty()) throw UsageError("nutrient CSV " + arg + " has no data row");
    const auto keys = split_commas(trim(header));
    const auto vals = split_commas(trim(row));
    if (keys.size() != vals.size()) throw UsageError("nutrient CSV " + arg + " row width differs from its header");
    return parse_named(names, keys, vals);
  }
  const auto vals = split_commas(arg);
  if (vals.size() != names.size()) {
    std::string list;
    for (const auto& f : names) list += (list.empty() ? "" : ",") + f;
    throw UsageError("nutrient row has " + std::to_string(vals.size()) + " values, expected " +
                     std::to_string(names.size()) + " (" + list + ")");
  }
  Nutrients n{std::vector<double>(names.size(), 0.0), std::vector<unsigned char>(names.size(), 0)};
  for (std::size_t i = 0; i < names.size(); ++i) parse_value(names[i], vals[i], n, i);
  return n;
}

const char* opt_text(const std::optional<std::string>& s) { return s ? s->c_str() : nullptr; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AgroSense: soil image and nutrient fusion for crop recommendation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(agro_version()));

  std::optional<std::uint64_t> seed;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Seed (overrides AGROSENSE_SEED and the config)");
  };

  std::string out, data, artifact, image, nutrients, spec_path, config_path, report_path, csv_path;
  std::optional<std::size_t> seed_count;
  bool all_samples = false;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic paired dataset");
  synth->add_option("--spec", spec_path, "Synthesis spec JSON file")->check(CLI::ExistingFile);
  synth->add_option("--out", out, "Output directory")->required();
  add_seed(synth);

  auto* train = app.add_subcommand("train", "Train the full pipeline and save an artifact");
  train->add_option("--data", data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  train->add_option("--config", config_path, "Run configuration JSON file")->check(CLI::ExistingFile);
  train->add_option("--out", out, "Artifact path")->required();
  train->add_option("--report", report_path, "Training report JSON path");
  add_seed(train);

  auto* evaluate = app.add_subcommand("evaluate", "Score an artifact on a dataset");
  evaluate->add_option("--artifact", artifact, "Pipeline artifact")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--data", data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--out", out, "Metrics report JSON path")->required();
  auto* all_flag = evaluate->add_flag("--all", all_samples, "Score every sample instead of the held-out test split");
  add_seed(evaluate);
  // The seed only selects the held-out split, so it cannot combine with --all.
  all_flag->excludes(evaluate->get_option("--seed"));

  auto* predict = app.add_subcommand("predict", "Recommend a crop for one image and nutrient profile");
  predict->add_option("--artifact", artifact, "Pipeline artifact")->required()->check(CLI::ExistingFile);
  predict->add_option("--image", image, "Soil image (PPM or raw tensor)")->required()->check(CLI::ExistingFile);
  predict->add_option("--nutrients", nutrients, "\"N=90,P=42,...\", a CSV row in schema order, or a CSV file")
      ->required();
  add_seed(predict);

  auto* ablate = app.add_subcommand("ablate", "Fused versus unimodal ablation with significance tests");
  ablate->add_option("--data", data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  ablate->add_option("--config", config_path, "Run configuration JSON file")->check(CLI::ExistingFile);
  ablate->add_option("--seeds", seed_count, "Number of seeds (at least 2)");
  ablate->add_option("--out", out, "Markdown report path")->required();
  ablate->add_option("--csv", csv_path, "CSV report path");
  add_seed(ablate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    const std::uint64_t* seed_ptr = seed ? &*seed : nullptr;
    std::optional<std::string> config_text;
    if (!config_path.empty()) config_text = read_text(config_path);

    if (*synth) {
      std::optional<std::string> spec_text;
      if (!spec_path.empty()) spec_text = read_text(spec_path);
      check(agro_synth(opt_text(spec_text), out.c_str(), seed_ptr));
      std::cout << "wrote dataset to " << out << '\n';
    } else if (*train) {
      Pipeline p;
      CString report;
      check(agro_train(data.c_str(), opt_text(config_text), seed_ptr, &p.p, &report.p));
      check(agro_pipeline_save(p.p, out.c_str()));
      if (!report_path.empty()) write_text(report_path, report.str() + "\n");
      std::cout << "wrote artifact to " << out << '\n';
    } else if (*evaluate) {
      Pipeline p;
      check(agro_pipeline_load(artifact.c_str(), &p.p));
      CString metrics;
      check(agro_evaluate(p.p, data.c_str(), all_samples ? 0 : 1, seed_ptr, &metrics.p));
      write_text(out, metrics.str() + "\n");
      std::cout << metrics.str() << '\n';
    } else if (*predict) {
      Pipeline p;
      check(agro_pipeline_load(artifact.c_str(), &p.p));
      if (seed_ptr) check(agro_pipeline_set_feedback_seed(p.p, *seed_ptr));
      std::vector<std::string> names;
      for (std::size_t i = 0; i < agro_pipeline_feature_count(p.p); ++i) names.emplace_back(agro_pipeline_feature_name(p.p, i));
      const auto n = parse_nutrients(nutrients, names);
      CString rec;
      check(agro_predict(p.p, image.c_str(), n.values.data(), n.missing.data(), n.values.size(), &rec.p));
      std::cout << rec.str() << '\n';
    } else if (*ablate) {
      std::vector<std::uint64_t> seeds;
      const char* env = std::getenv("AGROSENSE_SEED");
      const bool env_seed = env && *env;
      if (seed_count || seed_ptr || env_seed) {
        const std::size_t count = seed_count.value_or(5);
        if (count < 2) throw UsageError("--seeds must be at least 2 (paired t-tests need two runs)");
        // Consecutive seeds from the base seed: flag, then AGROSENSE_SEED, then 1.
        std::uint64_t base = 1;
        if (seed_ptr) {
          base = *seed_ptr;
        } else if (env_seed) {
          char* end = nullptr;
          base = std::strtoull(env, &end, 10);
          if (*end != '\0' || *env == '-') throw UsageError("AGROSENSE_SEED must be a non-negative integer");
        }
        for (std::size_t i = 0; i < count; ++i) seeds.push_back(base + i);
      }
      CString md, csv;
      check(agro_ablate(data.c_str(), opt_text(config_text), seeds.empty() ? nullptr : seeds.data(), seeds.size(),
                        &md.p, csv_path.empty() ? nullptr : &csv.p));
      write_text(out, md.str());
      if (!csv_path.empty()) write_text(csv_path, csv.str());
      std::cout << md.str();
    }
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RuntimeError& e) {
    std::cerr << e.what() << '\n';
    return e.status == AGRO_ERR_CONFIG ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
