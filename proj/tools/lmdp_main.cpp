// Command-line front end: parses arguments, reads the input file, dispatches
// to the library and maps errors onto the exit-code contract
// (0 decided, 2 usage or model error, 3 guard exceeded).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmdp/common.hpp"
#include "lmdp/modelio.hpp"
#include "lmdp/run.hpp"

namespace {

const char* kUsage = R"(usage: lmdp <command> [options]

commands:
  decide <model-file> --problem <tag> [--guard <n>] [--seed <n>]
                      [--emit-dir <dir>] [--oracle]
      Decide a strategy-existence problem on a model file and print the
      verdict.  The model file must carry the matching query line.
  generate <instance-file>
      Print the gadget model (query line included) for a reduction instance.

problem tags:
  TV>0 PB>0 PB=0 PB=1 PB<1 TV=0 TV<1 TV=1
  (shell-safe aliases: tv_gt0 pb_gt0 pb_eq0 pb_eq1 pb_lt1 tv_eq0 tv_lt1 tv_eq1)

options:
  --problem <tag>   problem to decide (required for decide)
  --guard <n>       enumeration budget, default 4096; overruns exit with 3
  --seed <n>        seed for randomized spot checks, default 0
  --emit-dir <dir>  for the TV=0/TV<1/TV=1 problems, write one .smt2
                    formula file per guess into this directory
  --oracle          also run the applicable brute-force or sampling
                    cross-check and record it in the evidence

exit codes: 0 decided, 2 usage or model error, 3 guard exceeded
)";

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n\n" << kUsage;
  return 2;
}

std::optional<std::uint64_t> parse_count(const std::string& text) {
  if (text.empty() || text[0] == '-') return std::nullopt;
  try {
    std::size_t used = 0;
    std::uint64_t value = std::stoull(text, &used);
    if (used != text.size()) return std::nullopt;
    return value;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) return std::nullopt;
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

int cmd_decide(const std::vector<std::string>& args) {
  lmdp::RunFlags flags;
  std::string model_path;
  std::string tag;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    auto value = [&](const char* flag) -> const std::string& {
      if (i + 1 >= args.size()) throw std::invalid_argument(std::string(flag) + " needs a value");
      return args[++i];
    };
    if (a == "--problem") {
      tag = value("--problem");
    } else if (a == "--guard") {
      const std::string& v = value("--guard");
      auto n = parse_count(v);
      if (!n) throw std::invalid_argument("--guard needs a nonnegative integer, got '" + v + "'");
      flags.guard = *n;
    } else if (a == "--seed") {
      const std::string& v = value("--seed");
      auto n = parse_count(v);
      if (!n) throw std::invalid_argument("--seed needs a nonnegative integer, got '" + v + "'");
      flags.seed = *n;
    } else if (a == "--emit-dir") {
      flags.emit_dir = value("--emit-dir");
    } else if (a == "--oracle") {
      flags.oracle = true;
    } else if (!a.empty() && a[0] == '-') {
      throw std::invalid_argument("unknown option '" + a + "'");
    } else if (model_path.empty()) {
      model_path = a;
    } else {
      throw std::invalid_argument("more than one model file given");
    }
  }
  if (model_path.empty()) throw std::invalid_argument("decide needs a model file");
  if (tag.empty()) throw std::invalid_argument("decide needs --problem <tag>");
  auto problem = lmdp::problem_from_tag(tag);
  if (!problem) throw std::invalid_argument("unknown problem tag '" + tag + "'");
  auto text = read_file(model_path);
  if (!text) throw std::invalid_argument("cannot read model file '" + model_path + "'");
  lmdp::ModelFile file = lmdp::parse_model(*text);
  lmdp::RunOutput out = lmdp::run(file, *problem, flags);
  std::cout << out.text;
  return out.exit_code;
}

int cmd_generate(const std::vector<std::string>& args) {
  std::string instance_path;
  for (const std::string& a : args) {
    if (!a.empty() && a[0] == '-') throw std::invalid_argument("unknown option '" + a + "'");
    if (!instance_path.empty()) throw std::invalid_argument("more than one instance file given");
    instance_path = a;
  }
  if (instance_path.empty()) throw std::invalid_argument("generate needs an instance file");
  auto text = read_file(instance_path);
  if (!text) throw std::invalid_argument("cannot read instance file '" + instance_path + "'");
  lmdp::Instance inst = lmdp::parse_instance(*text);
  std::cout << lmdp::generate_model_text(inst);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return usage_error("no command given");
  const std::string& command = args.front();
  if (command == "--help" || command == "-h" || command == "help") {
    std::cout << kUsage;
    return 0;
  }
  std::vector<std::string> rest(args.begin() + 1, args.end());
  try {
    if (command == "decide") return cmd_decide(rest);
    if (command == "generate") return cmd_generate(rest);
    return usage_error("unknown command '" + command + "'");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
