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

#ifndef CONVSIM_ERROR_HPP_
#define CONVSIM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace convsim {

// Base class for every failure raised by the library. The CLI maps these to
// exit code 2 (data/runtime error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (manifest, RTTM, stats file). Carries the 1-based line
// number when known, 0 otherwise, and optionally the file it came from.
class ParseError : public Error {
 public:
  ParseError(const std::string &detail, std::size_t line,
             const std::string &source = {})
      : Error(format(detail, line, source)),
        detail_(detail),
        line_(line) {}

  std::size_t line() const { return line_; }
  const std::string &detail() const { return detail_; }

 private:
  static std::string format(const std::string &detail, std::size_t line,
                            const std::string &source) {
    std::string msg = source.empty() ? "" : source + ": ";
    if (line > 0) msg += "line " + std::to_string(line) + ": ";
    return msg + detail;
  }

  std::string detail_;
  std::size_t line_;
};

// The speaker pool cannot satisfy a request and no refill is permitted.
class PoolExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace convsim

#endif  // CONVSIM_ERROR_HPP_
