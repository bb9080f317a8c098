// Copyright 2026 The acam Authors
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

#include "acam/error.hpp"

namespace acam {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::domain: return "domain error";
    case Errc::underdetermined: return "underdetermined fit";
    case Errc::singular_design: return "singular design";
    case Errc::calibration_incomplete: return "calibration incomplete";
    case Errc::configuration: return "configuration error";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::numeric: return "numeric error";
    case Errc::io: return "i/o error";
    case Errc::format: return "format error";
    case Errc::not_converged: return "not converged";
  }
  return "unknown error";
}

}  // namespace acam
