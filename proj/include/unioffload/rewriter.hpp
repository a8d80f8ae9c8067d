// SPDX-License-Identifier: Apache-2.0
//
// Whole-file transpilation: verbatim text passes through byte for byte and
// each invocation is replaced by its rendered pragmas at its indentation.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "unioffload/diagnostic.hpp"
#include "unioffload/lowering.hpp"
#include "unioffload/registry.hpp"

namespace unioffload {

struct TranspileConfig {
  Backend backend = Backend::Fallback;
  PragmaStyle style = PragmaStyle::Hash;
  Passthrough passthrough = Passthrough::Off;
  bool keep_directive_comment = false;  // add "// from: <invocation>" after the pragmas
};

struct TranspileResult {
  bool ok = true;
  std::string output;  // empty when !ok
  std::vector<Diagnostic> diagnostics;
};

TranspileResult transpile(std::string_view source, const TranspileConfig& config,
                          const Registry& registry);

}  // namespace unioffload
