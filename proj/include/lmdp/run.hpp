#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lmdp/common.hpp"
#include "lmdp/modelio.hpp"

namespace lmdp {

enum class Problem { TvGt0, PbGt0, PbEq0, PbEq1, PbLt1, TvEq0, TvLt1, TvEq1 };

// Tags as accepted on the command line: TV>0 PB>0 PB=0 PB=1 PB<1 TV=0 TV<1 TV=1.
std::optional<Problem> problem_from_tag(const std::string& tag);
std::string problem_tag(Problem p);

struct RunFlags {
  std::uint64_t guard = 4096;
  std::uint64_t seed = 0;
  std::string emit_dir;  // when set, the TV problems write one .smt2 file per guess
  bool oracle = false;   // run the applicable brute-force cross-check as well
};

struct RunOutput {
  Answer answer = Answer::Unknown;
  std::string text;   // verdict document, line-oriented (see README)
  int exit_code = 0;  // 0 decided; 3 guard exceeded
};

// Dispatches a problem on a parsed model file.  Model/query mismatches throw
// std::invalid_argument; guard overruns are reported via exit_code 3.
RunOutput run(const ModelFile& file, Problem problem, const RunFlags& flags);

// Reduction output as canonical model text, query line included.
std::string generate_model_text(const Instance& inst);

}  // namespace lmdp
