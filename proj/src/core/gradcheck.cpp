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

#include "gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace fagcn {
namespace {

double evaluate(const LossBuilder& loss_fn) {
  Tape tape;
  const double value = tape.value(loss_fn(tape)).values()[0];
  if (!std::isfinite(value)) throw NumericError("grad_check: loss is not finite");
  return value;
}

}  // namespace

GradCheckReport grad_check(const LossBuilder& loss_fn, const std::vector<NamedParam>& params,
                           double eps, std::size_t samples, Rng* rng) {
  if (!(eps > 0.0)) throw ConfigError("grad_check: eps must be positive");

  for (const NamedParam& p : params) p.matrix->zero_grad();
  {
    Tape tape;
    Var loss = loss_fn(tape);
    if (!std::isfinite(tape.value(loss).values()[0])) {
      throw NumericError("grad_check: loss is not finite");
    }
    tape.backward(loss);
  }
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (const NamedParam& p : params) {
    auto g = p.matrix->grad();
    analytic.emplace_back(g.begin(), g.end());
  }

  // (param, entry) pairs to probe.
  std::vector<std::pair<std::size_t, std::size_t>> probes;
  if (samples == 0) {
    for (std::size_t k = 0; k < params.size(); ++k)
      for (std::size_t e = 0; e < params[k].matrix->size(); ++e) probes.emplace_back(k, e);
  } else {
    if (rng == nullptr) throw ConfigError("grad_check: sampling requires an rng");
    std::size_t total = 0;
    for (const NamedParam& p : params) total += p.matrix->size();
    if (total == 0) throw ConfigError("grad_check: no parameters");
    for (std::size_t s = 0; s < samples; ++s) {
      std::size_t flat = rng->below(total);
      std::size_t k = 0;
      while (flat >= params[k].matrix->size()) flat -= params[k].matrix->size(), ++k;
      probes.emplace_back(k, flat);
    }
  }

  GradCheckReport report;
  report.groups.resize(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) report.groups[k].name = params[k].name;

  for (auto [k, e] : probes) {
    double& x = params[k].matrix->values()[e];
    const double saved = x;
    x = saved + eps;
    const double up = evaluate(loss_fn);
    x = saved - eps;
    const double down = evaluate(loss_fn);
    x = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double a = analytic[k][e];
    const double err = std::abs(a - numeric) / std::max(1.0, std::abs(a));
    GradCheckGroup& g = report.groups[k];
    ++g.checked;
    g.max_relative_error = std::max(g.max_relative_error, err);
    report.max_relative_error = std::max(report.max_relative_error, err);
  }
  return report;
}

}  // namespace fagcn
