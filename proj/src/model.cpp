#include "lmdp/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace lmdp {

Dist Dist::distribution(std::vector<Rat> w) {
  Rat sum;
  for (const auto& x : w) {
    if (x.sgn() < 0) throw std::invalid_argument("distribution with negative weight");
    sum += x;
  }
  if (sum != Rat(1)) throw std::invalid_argument("distribution weights sum to " + sum.str() + ", expected 1");
  return Dist(std::move(w));
}

Dist Dist::subdistribution(std::vector<Rat> w) {
  Rat sum;
  for (const auto& x : w) {
    if (x.sgn() < 0) throw std::invalid_argument("subdistribution with negative weight");
    sum += x;
  }
  if (sum > Rat(1)) throw std::invalid_argument("subdistribution weights sum to " + sum.str() + " > 1");
  return Dist(std::move(w));
}

Dist Dist::dirac(int n, int s) {
  std::vector<Rat> w(n);
  w.at(s) = 1;
  return Dist(std::move(w));
}

Rat Dist::total() const {
  Rat sum;
  for (const auto& x : w_) sum += x;
  return sum;
}

std::vector<int> Dist::support() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (!w_[i].is_zero()) out.push_back(i);
  return out;
}

namespace {

int find_sorted(const std::vector<std::string>& v, const std::string& name) {
  auto it = std::lower_bound(v.begin(), v.end(), name);
  if (it == v.end() || *it != name) return -1;
  return static_cast<int>(it - v.begin());
}

// Shared by both builders: resolve a successor list into a dense
// distribution row over the sorted state vector.
std::vector<Rat> resolve_row(const std::vector<std::string>& states,
                             const std::vector<std::pair<std::string, Rat>>& succ,
                             const std::string& where) {
  std::vector<Rat> row(states.size());
  std::vector<bool> seen(states.size(), false);
  Rat sum;
  for (const auto& [name, p] : succ) {
    int t = find_sorted(states, name);
    if (t < 0) throw std::invalid_argument(where + ": unknown successor state '" + name + "'");
    if (seen[t]) throw std::invalid_argument(where + ": duplicate successor state '" + name + "'");
    if (p.sgn() < 0) throw std::invalid_argument(where + ": negative probability for '" + name + "'");
    seen[t] = true;
    row[t] = p;
    sum += p;
  }
  if (sum != Rat(1)) throw std::invalid_argument(where + ": probabilities sum to " + sum.str() + ", expected 1");
  return row;
}

std::vector<std::string> label_universe(const std::vector<std::string>& per_state,
                                        const std::vector<std::string>& extra) {
  std::set<std::string> u(per_state.begin(), per_state.end());
  u.insert(extra.begin(), extra.end());
  return {u.begin(), u.end()};
}

}  // namespace

int Mdp::find_state(const std::string& name) const { return find_sorted(states_, name); }

int Mdp::state_index(const std::string& name) const {
  int s = find_state(name);
  if (s < 0) throw std::invalid_argument("unknown state '" + name + "'");
  return s;
}

bool Mdp::has_label(const std::string& l) const {
  return std::binary_search(labels_.begin(), labels_.end(), l);
}

int Mdp::find_action(int s, const std::string& name) const {
  for (int m = 0; m < action_count(s); ++m)
    if (acts_[s][m].name == name) return m;
  return -1;
}

int Lmc::find_state(const std::string& name) const { return find_sorted(states_, name); }

int Lmc::state_index(const std::string& name) const {
  int s = find_state(name);
  if (s < 0) throw std::invalid_argument("unknown state '" + name + "'");
  return s;
}

bool Lmc::has_label(const std::string& l) const {
  return std::binary_search(labels_.begin(), labels_.end(), l);
}

MdpBuilder& MdpBuilder::state(const std::string& name, const std::string& label) {
  states_.push_back({name, label, {}});
  return *this;
}

MdpBuilder& MdpBuilder::action(const std::string& name, std::vector<std::pair<std::string, Rat>> succ) {
  if (states_.empty()) throw std::invalid_argument("action before any state");
  states_.back().actions.push_back({name, std::move(succ)});
  return *this;
}

MdpBuilder& MdpBuilder::declare_label(const std::string& label) {
  extra_labels_.push_back(label);
  return *this;
}

Mdp MdpBuilder::build() const {
  Mdp m;
  for (const auto& st : states_) m.states_.push_back(st.name);
  std::sort(m.states_.begin(), m.states_.end());
  if (std::adjacent_find(m.states_.begin(), m.states_.end()) != m.states_.end())
    throw std::invalid_argument("duplicate state name");
  m.label_of_.resize(m.states_.size());
  m.acts_.resize(m.states_.size());
  for (const auto& st : states_) {
    int s = find_sorted(m.states_, st.name);
    m.label_of_[s] = st.label;
    if (st.actions.empty())
      throw std::invalid_argument("state '" + st.name + "' has no actions");
    auto sorted = st.actions;
    std::sort(sorted.begin(), sorted.end(),
              [](const RawAction& a, const RawAction& b) { return a.name < b.name; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      if (sorted[i].name == sorted[i + 1].name)
        throw std::invalid_argument("state '" + st.name + "': duplicate action '" + sorted[i].name + "'");
    for (const auto& act : sorted)
      m.acts_[s].push_back({act.name, resolve_row(m.states_, act.succ,
                                                  "state '" + st.name + "' action '" + act.name + "'")});
  }
  m.labels_ = label_universe(m.label_of_, extra_labels_);
  return m;
}

LmcBuilder& LmcBuilder::state(const std::string& name, const std::string& label) {
  states_.push_back({name, label, std::nullopt});
  return *this;
}

LmcBuilder& LmcBuilder::trans(std::vector<std::pair<std::string, Rat>> succ) {
  if (states_.empty()) throw std::invalid_argument("trans before any state");
  if (states_.back().succ) throw std::invalid_argument("state '" + states_.back().name + "' has two transition rows");
  states_.back().succ = std::move(succ);
  return *this;
}

LmcBuilder& LmcBuilder::declare_label(const std::string& label) {
  extra_labels_.push_back(label);
  return *this;
}

Lmc LmcBuilder::build() const {
  Lmc m;
  for (const auto& st : states_) m.states_.push_back(st.name);
  std::sort(m.states_.begin(), m.states_.end());
  if (std::adjacent_find(m.states_.begin(), m.states_.end()) != m.states_.end())
    throw std::invalid_argument("duplicate state name");
  m.label_of_.resize(m.states_.size());
  m.tau_.resize(m.states_.size());
  for (const auto& st : states_) {
    int s = find_sorted(m.states_, st.name);
    m.label_of_[s] = st.label;
    if (!st.succ) throw std::invalid_argument("state '" + st.name + "' has no transition row");
    m.tau_[s] = resolve_row(m.states_, *st.succ, "state '" + st.name + "'");
  }
  m.labels_ = label_universe(m.label_of_, extra_labels_);
  return m;
}

void validate_strategy(const Mdp& mdp, const Strategy& alpha) {
  if (static_cast<int>(alpha.w.size()) != mdp.n())
    throw std::invalid_argument("strategy undefined on some state");
  for (int s = 0; s < mdp.n(); ++s) {
    if (static_cast<int>(alpha.w[s].size()) != mdp.action_count(s))
      throw std::invalid_argument("strategy row size mismatch at '" + mdp.state_name(s) + "'");
    Rat sum;
    for (const auto& x : alpha.w[s]) {
      if (x.sgn() < 0)
        throw std::invalid_argument("negative strategy weight at '" + mdp.state_name(s) + "'");
      sum += x;
    }
    if (sum != Rat(1))
      throw std::invalid_argument("strategy weights at '" + mdp.state_name(s) + "' sum to " + sum.str());
  }
}

Strategy uniform_strategy(const Mdp& mdp) {
  Strategy a;
  a.w.resize(mdp.n());
  for (int s = 0; s < mdp.n(); ++s)
    a.w[s].assign(mdp.action_count(s), Rat(1, mdp.action_count(s)));
  return a;
}

Strategy strategy_from_md(const Mdp& mdp, const MdStrategy& alpha) {
  if (static_cast<int>(alpha.choice.size()) != mdp.n())
    throw std::invalid_argument("MD strategy undefined on some state");
  Strategy a;
  a.w.resize(mdp.n());
  for (int s = 0; s < mdp.n(); ++s) {
    int m = alpha.choice[s];
    if (m < 0 || m >= mdp.action_count(s))
      throw std::invalid_argument("MD strategy picks a missing action at '" + mdp.state_name(s) + "'");
    a.w[s].assign(mdp.action_count(s), Rat(0));
    a.w[s][m] = 1;
  }
  return a;
}

Strategy complete_with_first_action(const Mdp& mdp, const PartialStrategy& partial) {
  if (static_cast<int>(partial.w.size()) != mdp.n())
    throw std::invalid_argument("partial strategy size mismatch");
  Strategy a;
  a.w.resize(mdp.n());
  for (int s = 0; s < mdp.n(); ++s) {
    if (partial.w[s]) {
      a.w[s] = *partial.w[s];
      if (static_cast<int>(a.w[s].size()) != mdp.action_count(s))
        throw std::invalid_argument("partial strategy row size mismatch at '" + mdp.state_name(s) + "'");
    } else {
      a.w[s].assign(mdp.action_count(s), Rat(0));
      a.w[s][0] = 1;
    }
  }
  validate_strategy(mdp, a);
  return a;
}

bool strategy_randomizes(const Mdp& mdp, const Strategy& alpha) {
  for (int s = 0; s < mdp.n(); ++s) {
    int positive = 0;
    for (int m = 0; m < mdp.action_count(s); ++m)
      if (alpha.w[s][m].sgn() > 0) ++positive;
    if (positive > 1) return true;
  }
  return false;
}

Lmc induce(const Mdp& mdp, const Strategy& alpha) {
  validate_strategy(mdp, alpha);
  Lmc c;
  c.states_ = mdp.state_names();
  c.label_of_.resize(mdp.n());
  for (int s = 0; s < mdp.n(); ++s) c.label_of_[s] = mdp.label(s);
  c.labels_ = mdp.labels();
  c.tau_.assign(mdp.n(), std::vector<Rat>(mdp.n()));
  for (int s = 0; s < mdp.n(); ++s)
    for (int m = 0; m < mdp.action_count(s); ++m) {
      const Rat& wm = alpha.w[s][m];
      if (wm.is_zero()) continue;
      const auto& row = mdp.action_row(s, m);
      for (int t = 0; t < mdp.n(); ++t)
        if (!row[t].is_zero()) c.tau_[s][t] += wm * row[t];
    }
  return c;
}

Matrix label_matrix(const Lmc& lmc, const std::string& label) {
  if (!lmc.has_label(label))
    throw std::invalid_argument("unknown label '" + label + "'");
  Matrix m(lmc.n(), lmc.n());
  for (int s = 0; s < lmc.n(); ++s) {
    if (lmc.label(s) != label) continue;
    for (int t = 0; t < lmc.n(); ++t) m.at(s, t) = lmc.row(s)[t];
  }
  return m;
}

Rat word_prob(const Lmc& lmc, const Dist& pi, const Word& w) {
  if (pi.size() != lmc.n()) throw std::invalid_argument("distribution size mismatch");
  std::vector<Rat> cur = pi.weights();
  for (const auto& a : w) {
    std::vector<Rat> next(lmc.n());
    for (int s = 0; s < lmc.n(); ++s) {
      if (cur[s].is_zero() || lmc.label(s) != a) continue;
      for (int t = 0; t < lmc.n(); ++t)
        if (!lmc.row(s)[t].is_zero()) next[t] += cur[s] * lmc.row(s)[t];
    }
    cur = std::move(next);
  }
  Rat sum;
  for (const auto& x : cur) sum += x;
  return sum;
}

}  // namespace lmdp
