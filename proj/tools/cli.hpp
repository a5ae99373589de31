// Copyright 2026 The convsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CONVSIM_TOOLS_CLI_HPP_
#define CONVSIM_TOOLS_CLI_HPP_

#include <iosfwd>

namespace convsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point of the `convsim` tool. Subcommands: estimate-stats, simulate,
// simulate-mixtures, report. Results go to `out` or files, diagnostics to
// `err`.
int run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err);

}  // namespace convsim::cli

#endif  // CONVSIM_TOOLS_CLI_HPP_
