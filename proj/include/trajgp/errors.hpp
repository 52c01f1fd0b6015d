/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_ERRORS_HPP_
#define TRAJGP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace trajgp {

// Error taxonomy mapped to process exit codes by the CLI:
//   config_error  -> 2 (bad configuration / unusable options)
//   data_error    -> 3 (malformed or inconsistent input data)
//   numeric_error -> 4 (numerical failure, e.g. a Cholesky breakdown)
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trajgp

#endif  // TRAJGP_ERRORS_HPP_
