#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ekd/diagram.hpp"

namespace ekd {

// Schema-level failure; `pointer` is a JSON-pointer-style path to the
// offending element.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// Decodes an ekd-v1 document without semantic validation. Crossings may carry
// either "quadrant_sign_0" or a full "quadrant_signs" vector; alternation
// violations in the latter are appended to `sign_errors` when given (and
// rejected otherwise).
Diagram decode(const std::string& bytes, std::vector<std::string>* sign_errors = nullptr);

// decode + validate; throws ParseError or std::invalid_argument.
Diagram parse(const std::string& bytes);

std::string serialize(const Diagram& d);

Diagram load_file(const std::string& path);
void save_file(const Diagram& d, const std::string& path);

}  // namespace ekd
