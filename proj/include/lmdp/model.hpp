#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmdp/linalg.hpp"
#include "lmdp/rat.hpp"

namespace lmdp {

using Word = std::vector<std::string>;  // finite label sequence

// Probability vector over the states of a fixed model, dense in that model's
// canonical state order.  Factories enforce the weight discipline: a
// distribution sums to exactly 1, a subdistribution to at most 1 (the zero
// vector is representable and reports is_zero()).
class Dist {
 public:
  static Dist distribution(std::vector<Rat> w);
  static Dist subdistribution(std::vector<Rat> w);
  static Dist dirac(int n, int s);

  const std::vector<Rat>& weights() const { return w_; }
  const Rat& operator[](int s) const { return w_[s]; }
  int size() const { return static_cast<int>(w_.size()); }
  Rat total() const;
  bool is_zero() const { return total().is_zero(); }
  std::vector<int> support() const;

  friend bool operator==(const Dist& a, const Dist& b) { return a.w_ == b.w_; }

 private:
  explicit Dist(std::vector<Rat> w) : w_(std::move(w)) {}
  std::vector<Rat> w_;
};

// Labelled Markov decision process.  States, labels and action names are
// strings; the canonical order of states (and of actions within a state) is
// lexicographic, fixed at build time, and all indices below refer to it.
class Mdp {
 public:
  struct ActionRow {
    std::string name;
    std::vector<Rat> row;  // successor distribution, dense over states
  };

  int n() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& state_names() const { return states_; }
  const std::string& state_name(int s) const { return states_[s]; }
  // -1 when absent.
  int find_state(const std::string& name) const;
  // Throws std::invalid_argument when absent.
  int state_index(const std::string& name) const;

  const std::string& label(int s) const { return label_of_[s]; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_label(const std::string& l) const;

  int action_count(int s) const { return static_cast<int>(acts_[s].size()); }
  const std::string& action_name(int s, int m) const { return acts_[s][m].name; }
  const std::vector<Rat>& action_row(int s, int m) const { return acts_[s][m].row; }
  // -1 when absent.
  int find_action(int s, const std::string& name) const;

  friend class MdpBuilder;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> label_of_;
  std::vector<std::string> labels_;
  std::vector<std::vector<ActionRow>> acts_;
};

// Labelled Markov chain; same conventions as Mdp, one row per state.
class Lmc {
 public:
  int n() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& state_names() const { return states_; }
  const std::string& state_name(int s) const { return states_[s]; }
  int find_state(const std::string& name) const;
  int state_index(const std::string& name) const;

  const std::string& label(int s) const { return label_of_[s]; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_label(const std::string& l) const;

  const std::vector<Rat>& row(int s) const { return tau_[s]; }

  friend bool operator==(const Lmc& a, const Lmc& b) {
    return a.states_ == b.states_ && a.label_of_ == b.label_of_ && a.tau_ == b.tau_;
  }

  friend class LmcBuilder;
  friend Lmc induce(const Mdp&, const struct Strategy&);

 private:
  std::vector<std::string> states_;
  std::vector<std::string> label_of_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Rat>> tau_;
};

class MdpBuilder {
 public:
  MdpBuilder& state(const std::string& name, const std::string& label);
  // Applies to the most recently added state.
  MdpBuilder& action(const std::string& name, std::vector<std::pair<std::string, Rat>> succ);
  // Extends the label universe beyond the labels carried by states.
  MdpBuilder& declare_label(const std::string& label);
  Mdp build() const;  // sorts canonically, validates; throws std::invalid_argument

 private:
  struct RawAction {
    std::string name;
    std::vector<std::pair<std::string, Rat>> succ;
  };
  struct RawState {
    std::string name, label;
    std::vector<RawAction> actions;
  };
  std::vector<RawState> states_;
  std::vector<std::string> extra_labels_;
};

class LmcBuilder {
 public:
  LmcBuilder& state(const std::string& name, const std::string& label);
  LmcBuilder& trans(std::vector<std::pair<std::string, Rat>> succ);
  LmcBuilder& declare_label(const std::string& label);
  Lmc build() const;

 private:
  struct RawState {
    std::string name, label;
    std::optional<std::vector<std::pair<std::string, Rat>>> succ;
  };
  std::vector<RawState> states_;
  std::vector<std::string> extra_labels_;
};

// Total memoryless strategy: w[s][m] is the weight of action m at state s;
// every row is a distribution over A(s).
struct Strategy {
  std::vector<std::vector<Rat>> w;
};

// Memoryless deterministic strategy: one chosen action per state.
struct MdStrategy {
  std::vector<int> choice;

  friend bool operator==(const MdStrategy& a, const MdStrategy& b) { return a.choice == b.choice; }
};

// Memoryless strategy defined only on some states.
struct PartialStrategy {
  std::vector<std::optional<std::vector<Rat>>> w;
};

void validate_strategy(const Mdp& mdp, const Strategy& alpha);  // throws std::invalid_argument
Strategy uniform_strategy(const Mdp& mdp);
Strategy strategy_from_md(const Mdp& mdp, const MdStrategy& alpha);
// Completes with the Dirac on the canonically first action where undefined.
Strategy complete_with_first_action(const Mdp& mdp, const PartialStrategy& partial);
bool strategy_randomizes(const Mdp& mdp, const Strategy& alpha);

// Chain induced by a total memoryless strategy:
// tau(s)(t) = sum_m alpha(s)(m) * phi(s,m)(t).
Lmc induce(const Mdp& mdp, const Strategy& alpha);

// M(a)(s,t) = tau(s)(t) if label(s) = a, else 0.  Throws for labels outside
// the chain's label universe (a declared-but-unused label gives the zero
// matrix).
Matrix label_matrix(const Lmc& lmc, const std::string& label);

// Pr_pi(Run(w)) = | pi . M(w) |.  Labels carried by no state contribute zero
// matrices, so any word is accepted.
Rat word_prob(const Lmc& lmc, const Dist& pi, const Word& w);

}  // namespace lmdp
