// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace unioffload {

// Data files compiled into the library (generated from data/ at build time).
std::string_view bundled_registry_text();
std::string_view bundled_rows_text();

}  // namespace unioffload
