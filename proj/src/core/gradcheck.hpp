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

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rng.hpp"
#include "tensor.hpp"

namespace fagcn {

struct NamedParam {
  std::string name;
  DenseMatrix* matrix = nullptr;
};

struct GradCheckGroup {
  std::string name;
  std::size_t checked = 0;
  double max_relative_error = 0.0;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::vector<GradCheckGroup> groups;
};

/// Builds the scalar loss on a fresh tape. Parameters must be bound with
/// Tape::parameter so their grad slots receive the analytic gradient.
using LossBuilder = std::function<Var(Tape&)>;

/// Compares tape gradients with central differences.
///
/// Error per entry is |analytic - numeric| / max(1, |analytic|). With
/// `samples == 0` every entry of every parameter is checked; otherwise that
/// many entries are drawn uniformly over the concatenated parameters.
GradCheckReport grad_check(const LossBuilder& loss_fn, const std::vector<NamedParam>& params,
                           double eps, std::size_t samples = 0, Rng* rng = nullptr);

}  // namespace fagcn
