#ifndef NVDD_ERRORS_H
#define NVDD_ERRORS_H

#include <stdexcept>
#include <string>

namespace nvdd {

// Bad user input: schedule text, configuration values, flags.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Schedule text could not be parsed. `line()` is 1-based.
class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& message)
      : ConfigError("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A computation produced an unusable result (e.g. a projection onto an empty subspace).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nvdd

#endif  // NVDD_ERRORS_H
