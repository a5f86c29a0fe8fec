// Copyright (c) 2026 weylscat developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace weylscat {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid physical input (negative energy, transverse momentum exceeding E/c, ...).
struct domain_error : error {
  using error::error;
};

// A denominator collapsed: p1 = 0, 1 + alpha = 0, E = V0, near-singular
// continuity matrix and the like.
struct singularity_error : error {
  using error::error;
};

// Operation invoked outside the energy zone it is defined in.
struct regime_error : error {
  using error::error;
};

// Asking a divergent series for its sum.
struct series_divergence_error : error {
  using error::error;
};

// Spectral or spatial sampling cannot resolve the requested configuration.
struct quadrature_error : error {
  using error::error;
};

// Bad CLI arguments or config-file entries.
struct config_error : error {
  using error::error;
};

}  // namespace weylscat
