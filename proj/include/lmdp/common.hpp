#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lmdp {

enum class Answer { Yes, No, Unknown };

inline const char* answer_str(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    default: return "unknown";
  }
}

// Thrown when an enumeration-based search would exceed its configured budget.
// The search makes no claim about the answer in that case.
struct GuardExceeded : std::runtime_error {
  std::uint64_t limit;
  GuardExceeded(const std::string& what, std::uint64_t limit_)
      : std::runtime_error(what), limit(limit_) {}
};

// Positioned error for the text formats (models, instances).
struct ParseError : std::runtime_error {
  int line;  // 1-based; 0 when not tied to a position
  int col;   // 1-based; 0 when unknown
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

}  // namespace lmdp
