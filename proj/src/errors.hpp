// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace subseg {

// Malformed data: bad UTF-8, marker collisions, unparseable model files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter combinations that can never work (e.g. target size below the
// alphabet size). Distinct from InputError so callers can map exit codes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subseg
