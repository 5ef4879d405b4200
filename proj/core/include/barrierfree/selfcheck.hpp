// Copyright 2026 The barrierfree Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace barrierfree::kernels {

struct SelfCheckOptions {
  int cases = 1000;
  std::uint64_t seed = 20240601;
  // Names a property whose kernel is swapped for a deliberately broken
  // variant. Used as a negative control.
  std::string inject_fault;
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  int cases = 0;
};

// Kernel invariant suite: space-to-depth bijectivity, z-pool dominance,
// triplet-attention bounds, loss reductions, and finite-difference gradient
// checks of the three losses.
std::vector<PropertyResult> run_selfcheck(const SelfCheckOptions& options);

std::vector<std::string> selfcheck_property_names();

}  // namespace barrierfree::kernels
