#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pretlab {

// Domain error with a stable name. The CLI prints the name and exits 1,
// tests match on it.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

[[noreturn]] inline void raise(const std::string& name, const std::string& what) {
  throw Error(name, what);
}

}  // namespace pretlab
