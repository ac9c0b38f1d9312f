#pragma once

#include <stdexcept>
#include <string>

namespace cadefect {

enum class ErrorKind {
  parse,
  unsupported,
  inadmissible,
  no_condensation,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cadefect
