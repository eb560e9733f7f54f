/*
Copyright 2026 The fagcn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "sweep.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "json.hpp"
#include "trainer.hpp"

namespace fagcn {

using nlohmann::json;

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNoiseInject:
      return "noise-inject";
    case SweepAxis::kNoiseReplace:
      return "noise-replace";
    case SweepAxis::kInputDim:
      return "d_i";
    case SweepAxis::kOutputDim:
      return "d_o";
    case SweepAxis::kHiddenDim:
      return "d_h";
    case SweepAxis::kLabelFraction:
      return "p";
  }
  return "";
}

namespace {

bool is_noise(SweepAxis axis) {
  return axis == SweepAxis::kNoiseInject || axis == SweepAxis::kNoiseReplace;
}

SweepAxis parse_axis(const std::string& name) {
  for (SweepAxis a : {SweepAxis::kNoiseInject, SweepAxis::kNoiseReplace, SweepAxis::kInputDim,
                      SweepAxis::kOutputDim, SweepAxis::kHiddenDim, SweepAxis::kLabelFraction}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("sweep: unknown axis '" + name + "'");
}

std::size_t as_dimension(double value) {
  if (!(value >= 1.0) || std::floor(value) != value) {
    throw ConfigError("sweep: dimension value " + std::to_string(value) +
                      " is not a positive integer");
  }
  return static_cast<std::size_t>(value);
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

SweepSpec SweepSpec::from_json(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("sweep: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("sweep: top level must be an object");
  SweepSpec spec;
  bool have_axis = false;
  for (const auto& [key, v] : doc.items()) {
    if (key == "axis") {
      if (!v.is_string()) throw ConfigError("sweep: axis must be a string");
      spec.axis = parse_axis(v.get<std::string>());
      have_axis = true;
    } else if (key == "values") {
      if (!v.is_array()) throw ConfigError("sweep: values must be an array");
      for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError("sweep: values must be numbers");
        spec.values.push_back(x.get<double>());
      }
    } else if (key == "variants") {
      if (!v.is_array()) throw ConfigError("sweep: variants must be an array");
      for (const auto& x : v) {
        auto parsed = x.is_string() ? parse_model_variant(x.get<std::string>()) : std::nullopt;
        if (!parsed) throw ConfigError("sweep: unknown variant " + x.dump());
        spec.variants.push_back(*parsed);
      }
    } else if (key == "seeds") {
      if (!v.is_array()) throw ConfigError("sweep: seeds must be an array");
      for (const auto& x : v) {
        if (!x.is_number_integer() || x.get<std::int64_t>() < 0) {
          throw ConfigError("sweep: seeds must be non-negative integers");
        }
        spec.seeds.push_back(x.get<std::uint64_t>());
      }
    } else if (key == "edges" || key == "content") {
      if (!v.is_string()) throw ConfigError("sweep: " + key + " must be a path string");
      std::filesystem::path p = v.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      (key == "edges" ? spec.edges : spec.content) = p;
    } else {
      throw ConfigError("sweep: unknown key '" + key + "'");
    }
  }
  if (!have_axis) throw ConfigError("sweep: missing axis");
  if (spec.values.empty()) throw ConfigError("sweep: values must not be empty");
  return spec;
}

ExperimentConfig with_axis_value(ExperimentConfig cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::kNoiseInject:
      cfg.noise_protocol = NoiseProtocol::kInject;
      cfg.noise_ratio = value;
      break;
    case SweepAxis::kNoiseReplace:
      cfg.noise_protocol = NoiseProtocol::kReplace;
      cfg.noise_ratio = value;
      break;
    case SweepAxis::kInputDim:
      cfg.d_i = as_dimension(value);
      break;
    case SweepAxis::kOutputDim:
      cfg.d_o = as_dimension(value);
      break;
    case SweepAxis::kHiddenDim:
      cfg.d_h = as_dimension(value);
      break;
    case SweepAxis::kLabelFraction:
      cfg.p = value;
      break;
  }
  cfg.validate();
  return cfg;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const Graph& graph,
                                const ContentCorpus& clean_corpus, std::size_t vocab_size,
                                SweepAxis axis, const std::vector<double>& values,
                                const std::vector<ModelVariant>& variants,
                                const std::vector<std::uint64_t>& seeds, unsigned threads) {
  if (values.empty()) throw ConfigError("sweep: no axis values");
  if (variants.empty()) throw ConfigError("sweep: no variants");
  if (seeds.empty()) throw ConfigError("sweep: no seeds");

  // Validate every cell before spending time on training.
  std::vector<ExperimentConfig> cells;
  for (double value : values)
    for (ModelVariant variant : variants) {
      ExperimentConfig c = base;
      c.variant = variant;
      cells.push_back(with_axis_value(c, axis, value));
    }

  const std::size_t per_cell = seeds.size();
  std::vector<double> accuracy(cells.size() * per_cell);
  parallel_for(accuracy.size(), threads, [&](std::size_t job) {
    ExperimentConfig c = cells[job / per_cell];
    c.seed = seeds[job % per_cell];
    accuracy[job] = run_trial(c, graph, clean_corpus, vocab_size).history.test_accuracy;
  });

  std::vector<SweepRow> rows;
  rows.reserve(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const RepeatResult r = summarize(std::vector<double>(
        accuracy.begin() + static_cast<std::ptrdiff_t>(k * per_cell),
        accuracy.begin() + static_cast<std::ptrdiff_t>((k + 1) * per_cell)));
    rows.push_back({axis, values[k / variants.size()], cells[k].variant, r.mean, r.stddev, seeds});
  }
  return rows;
}

std::vector<SweepRow> noise_sweep(const ExperimentConfig& base, const Graph& graph,
                                  const ContentCorpus& clean_corpus, std::size_t vocab_size,
                                  NoiseProtocol protocol, const std::vector<double>& ratios,
                                  const std::vector<ModelVariant>& variants,
                                  const std::vector<std::uint64_t>& seeds, unsigned threads) {
  SweepAxis axis;
  if (protocol == NoiseProtocol::kInject) {
    axis = SweepAxis::kNoiseInject;
  } else if (protocol == NoiseProtocol::kReplace) {
    axis = SweepAxis::kNoiseReplace;
  } else {
    throw ConfigError("noise_sweep: protocol must be inject or replace");
  }
  return run_sweep(base, graph, clean_corpus, vocab_size, axis, ratios, variants, seeds, threads);
}

std::string sweep_csv(const std::vector<SweepRow>& rows, SweepAxis axis) {
  std::string out = is_noise(axis) ? "protocol,ratio,variant,mean_accuracy,std_accuracy,seeds\n"
                                   : "axis,value,variant,mean_accuracy,std_accuracy,seeds\n";
  for (const SweepRow& r : rows) {
    if (is_noise(axis)) {
      out += r.axis == SweepAxis::kNoiseInject ? "inject" : "replace";
    } else {
      out += to_string(r.axis);
    }
    out += "," + number(r.value) + "," + std::string(to_string(r.variant)) + "," +
           fixed4(r.mean_accuracy) + "," + fixed4(r.std_accuracy) + ",";
    for (std::size_t k = 0; k < r.seeds.size(); ++k) {
      if (k) out += ";";
      out += std::to_string(r.seeds[k]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace fagcn
