// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unioffload::cli {

// argv[0] is the program name. Exit status: 0 success, 1 transpile or
// verification failure, 2 flag misuse.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err, std::istream& in,
        bool color = false);

}  // namespace unioffload::cli
