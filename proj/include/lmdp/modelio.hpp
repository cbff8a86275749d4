#pragma once

#include <optional>
#include <string>
#include <variant>

#include "lmdp/common.hpp"
#include "lmdp/model.hpp"
#include "lmdp/reductions.hpp"

namespace lmdp {

struct Query {
  enum class Kind { None, Tv, Pb };
  Kind kind = Kind::None;
  std::optional<Dist> mu, nu;  // Tv
  int s = -1, t = -1;          // Pb
};

struct ModelFile {
  std::optional<Mdp> mdp;  // exactly one of mdp / lmc is set
  std::optional<Lmc> lmc;
  Query query;

  bool is_mdp() const { return mdp.has_value(); }
  const Mdp& as_mdp() const;
  const Lmc& as_lmc() const;
};

// Text format:
//   mdp | lmc
//   state <id> label <label>
//     action <name> -> <id>:<rat>[, <id>:<rat>]...
//   query tv mu {<id>:<rat>[, ...]} nu {...}
//   query pb <s> <t>
// Identifiers are nonempty and free of whitespace and of the delimiters
// ':' ',' '{' '}' '#'; rationals are n or n/d (no decimals); '#' starts a
// comment.  An lmc carries exactly one action row per state.  Throws
// ParseError with a position on malformed input.
ModelFile parse_model(const std::string& text);

// Canonical text for a model file; serializing, reparsing and serializing
// again reproduces the same text.
std::string serialize_model(const ModelFile& f);

using Instance = std::variant<SubsetSumInstance, SetSplitInstance, NmfInstance>;

// Instance format, selected by the header line:
//   subsetsum           setsplit            nmf
//   values 3 1 4        elements 3          rank 2
//   target 5            set e1 e2           row 1/2 1/2
//                       set e2 e3           row 1/3 2/3
Instance parse_instance(const std::string& text);

}  // namespace lmdp
