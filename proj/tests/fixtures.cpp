#include "fixtures.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fixtures {

Mdp mdp_randomized_separation() {
  MdpBuilder b;
  b.state("s", "a").action("m", {{"sa", Rat(1, 2)}, {"sb", Rat(1, 2)}});
  b.state("t", "a").action("m", {{"ta", Rat(1, 2)}, {"tb", Rat(1, 2)}});
  b.state("sa", "a").action("m", {{"q2", 1}});
  b.state("sb", "a").action("m", {{"q1", Rat(1, 2)}, {"q3", Rat(1, 2)}});
  b.state("ta", "a").action("m", {{"q1", Rat(1, 2)}, {"q2", Rat(1, 2)}});
  b.state("tb", "a").action("m", {{"q2", Rat(1, 2)}, {"q3", Rat(1, 2)}});
  b.state("q1", "a").action("m", {{"u", 1}});
  b.state("q2", "a").action("m1", {{"u", 1}}).action("m2", {{"v", 1}});
  b.state("q3", "a").action("m", {{"v", 1}});
  b.state("u", "a").action("m", {{"u", 1}});
  b.state("v", "b").action("m", {{"v", 1}});
  return b.build();
}

Mdp mdp_distance_one_needs_mixing() {
  MdpBuilder b;
  b.state("s", "a").action("m", {{"sp", 1}});
  b.state("sp", "a").action("ma", {{"sa", 1}}).action("mb", {{"sb", 1}});
  b.state("sa", "a").action("m", {{"sp", 1}});
  b.state("sb", "b").action("m", {{"sp", 1}});
  b.state("t", "a").action("m", {{"t1", Rat(1, 2)}, {"t2", Rat(1, 2)}});
  b.state("t1", "a").action("m", {{"ta", 1}});
  b.state("t2", "a").action("m", {{"tb", 1}});
  b.state("ta", "a").action("m", {{"t1", 1}});
  b.state("tb", "b").action("m", {{"t2", 1}});
  return b.build();
}

Mdp mdp_unique_half_half_merge() {
  MdpBuilder b;
  b.state("s", "a").action("m1", {{"sa", 1}}).action("m2", {{"sb", 1}});
  b.state("sa", "a").action("m", {{"sa", 1}});
  b.state("sb", "b").action("m", {{"sb", 1}});
  b.state("t", "a").action("m", {{"ta", Rat(1, 2)}, {"tb", Rat(1, 2)}});
  b.state("ta", "a").action("m", {{"ta", 1}});
  b.state("tb", "b").action("m", {{"tb", 1}});
  return b.build();
}

Mdp mdp_loopback_half_half() {
  MdpBuilder b;
  b.state("s", "a").action("m1", {{"sa", 1}}).action("m2", {{"sb", 1}});
  b.state("sa", "a").action("m", {{"s", 1}});
  b.state("sb", "b").action("m", {{"s", 1}});
  b.state("t", "a").action("m", {{"ta", Rat(1, 2)}, {"tb", Rat(1, 2)}});
  b.state("ta", "a").action("m", {{"t", 1}});
  b.state("tb", "b").action("m", {{"t", 1}});
  return b.build();
}

Lmc lmc_branch_timing_pair() {
  LmcBuilder b;
  b.state("x0", "a").trans({{"x1", Rat(1, 2)}, {"x2", Rat(1, 2)}});
  b.state("x1", "b").trans({{"x3", 1}});
  b.state("x2", "b").trans({{"x4", 1}});
  b.state("x3", "c").trans({{"x3", 1}});
  b.state("x4", "d").trans({{"x4", 1}});
  b.state("y0", "a").trans({{"y1", 1}});
  b.state("y1", "b").trans({{"y3", Rat(1, 2)}, {"y4", Rat(1, 2)}});
  b.state("y3", "c").trans({{"y3", 1}});
  b.state("y4", "d").trans({{"y4", 1}});
  return b.build();
}

std::uint64_t Rng::next() {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

Mdp random_mdp(Rng& rng, int max_states, int max_actions, int max_labels) {
  int n = 2 + static_cast<int>(rng.below(max_states - 1));
  int nl = 1 + static_cast<int>(rng.below(max_labels));
  MdpBuilder b;
  static const char* label_pool[] = {"a", "b", "c", "d"};
  for (int s = 0; s < n; ++s) {
    std::string name = "s" + std::to_string(s);
    b.state(name, label_pool[rng.below(nl)]);
    int na = 1 + static_cast<int>(rng.below(max_actions));
    for (int m = 0; m < na; ++m) {
      int k = 1 + static_cast<int>(rng.below(2));  // 1 or 2 successors
      std::vector<std::pair<std::string, Rat>> succ;
      int t1 = static_cast<int>(rng.below(n));
      if (k == 1) {
        succ.push_back({"s" + std::to_string(t1), Rat(1)});
      } else {
        int t2 = static_cast<int>(rng.below(n));
        if (t2 == t1) t2 = (t2 + 1) % n;
        long w1 = 1 + static_cast<long>(rng.below(3));
        long w2 = 1 + static_cast<long>(rng.below(3));
        succ.push_back({"s" + std::to_string(t1), Rat(w1, w1 + w2)});
        succ.push_back({"s" + std::to_string(t2), Rat(w2, w1 + w2)});
      }
      b.action("m" + std::to_string(m), std::move(succ));
    }
  }
  return b.build();
}

Dist random_dist(Rng& rng, int n) {
  if (rng.below(3) == 0) return Dist::dirac(n, static_cast<int>(rng.below(n)));
  std::vector<long> raw(n);
  long sum = 0;
  for (auto& x : raw) {
    x = static_cast<long>(rng.below(4));
    sum += x;
  }
  if (sum == 0) return Dist::dirac(n, static_cast<int>(rng.below(n)));
  std::vector<Rat> w(n);
  for (int i = 0; i < n; ++i) w[i] = Rat(raw[i], sum);
  return Dist::distribution(std::move(w));
}

Strategy random_positive_strategy(Rng& rng, const Mdp& mdp) {
  Strategy a;
  a.w.resize(mdp.n());
  for (int s = 0; s < mdp.n(); ++s) {
    int k = mdp.action_count(s);
    std::vector<long> raw(k);
    long sum = 0;
    for (auto& x : raw) {
      x = 1 + static_cast<long>(rng.below(9));
      sum += x;
    }
    a.w[s].resize(k);
    for (int m = 0; m < k; ++m) a.w[s][m] = Rat(raw[m], sum);
  }
  return a;
}

bool subsetsum_brute(const std::vector<long>& values, long target) {
  std::size_t n = values.size();
  for (std::size_t mask = 0; mask < (1ull << n); ++mask) {
    long sum = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) sum += values[i];
    if (sum == target) return true;
  }
  return false;
}

bool setsplit_brute(int n_elements, const std::vector<std::vector<int>>& sets) {
  for (std::uint64_t mask = 0; mask < (1ull << n_elements); ++mask) {
    bool ok = true;
    for (const auto& set : sets) {
      bool in1 = false, in2 = false;
      for (int e : set) {
        if (mask & (1ull << e)) in1 = true; else in2 = true;
      }
      if (!(in1 && in2)) { ok = false; break; }
    }
    if (ok) return true;
  }
  return false;
}

std::optional<std::vector<Rat>> combination_coefficients(
    const std::vector<std::vector<Rat>>& rows, const std::vector<Rat>& target) {
  const std::size_t k = rows.size();
  const std::size_t n = target.size();
  // Augmented elimination [row | e_i]: reducing (target | 0) against the
  // echelon rows leaves (0 | -coeffs) exactly when target is in the span.
  std::vector<std::vector<Rat>> aug;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Rat> row(n + k);
    for (std::size_t j = 0; j < n; ++j) row[j] = rows[i][j];
    row[n + i] = 1;
    aug.push_back(std::move(row));
  }
  std::vector<std::size_t> pivot_of;  // pivot column of each kept echelon row
  std::vector<std::vector<Rat>> echelon;
  for (auto& row : aug) {
    for (std::size_t e = 0; e < echelon.size(); ++e)
      if (!row[pivot_of[e]].is_zero()) {
        Rat f = row[pivot_of[e]] / echelon[e][pivot_of[e]];
        for (std::size_t j = 0; j < n + k; ++j) row[j] -= f * echelon[e][j];
      }
    std::size_t p = 0;
    while (p < n && row[p].is_zero()) ++p;
    if (p == n) return std::nullopt;  // dependent input rows: combination not unique
    pivot_of.push_back(p);
    echelon.push_back(std::move(row));
  }
  std::vector<Rat> t(n + k);
  for (std::size_t j = 0; j < n; ++j) t[j] = target[j];
  for (std::size_t e = 0; e < echelon.size(); ++e)
    if (!t[pivot_of[e]].is_zero()) {
      Rat f = t[pivot_of[e]] / echelon[e][pivot_of[e]];
      for (std::size_t j = 0; j < n + k; ++j) t[j] -= f * echelon[e][j];
    }
  for (std::size_t j = 0; j < n; ++j)
    if (!t[j].is_zero()) return std::nullopt;
  std::vector<Rat> coeffs(k);
  for (std::size_t i = 0; i < k; ++i) coeffs[i] = -t[n + i];
  return coeffs;
}

std::optional<std::vector<Rat>> tv_eq0_witness_assignment(const EtrFormula& formula,
                                                          const Mdp& mdp, const Strategy& alpha,
                                                          const Dist& mu, const Dist& nu) {
  const int n = mdp.n();
  const Lmc chain = induce(mdp, alpha);
  std::vector<Matrix> letters;
  for (const std::string& label : mdp.labels()) letters.push_back(label_matrix(chain, label));

  // Closure of mu - nu under right-multiplication by the one-letter matrices;
  // every vector collected this way is a word-probability difference profile,
  // so it must have zero mass when alpha is a trace-equivalence witness.
  std::vector<Rat> diff(n);
  for (int j = 0; j < n; ++j) diff[j] = mu[j] - nu[j];
  Span span(n);
  std::vector<std::vector<Rat>> basis;
  if (span.insert(diff)) basis.push_back(diff);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (const Matrix& m : letters) {
      std::vector<Rat> next = m.mul_row(basis[i]);
      if (span.insert(next)) basis.push_back(std::move(next));
    }
  const std::vector<Rat> one = ones(n);
  for (const auto& row : basis)
    if (!dot(row, one).is_zero()) return std::nullopt;

  std::vector<Rat> assignment(formula.vars.size());
  auto put = [&](const std::string& name, const Rat& value) {
    int id = formula.var_index(name);
    if (id < 0) throw std::invalid_argument("formula lacks variable " + name);
    assignment[static_cast<std::size_t>(id)] = value;
  };
  for (int s = 0; s < n; ++s)
    for (int m = 0; m < mdp.action_count(s); ++m)
      put("x_" + std::to_string(s) + "_" + std::to_string(m), alpha.w[s][m]);
  const std::size_t rank = basis.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      put("F_" + std::to_string(i) + "_" + std::to_string(j),
          static_cast<std::size_t>(i) < rank ? basis[i][j] : Rat(0));
  for (std::size_t l = 0; l < letters.size(); ++l)
    for (int i = 0; i < n; ++i) {
      std::vector<Rat> coeffs(rank);
      if (static_cast<std::size_t>(i) < rank) {
        std::vector<Rat> image = letters[l].mul_row(basis[i]);
        auto c = combination_coefficients(basis, image);
        if (!c) return std::nullopt;
        coeffs = std::move(*c);
      }
      for (int j = 0; j < n; ++j)
        put("B" + std::to_string(l) + "_" + std::to_string(i) + "_" + std::to_string(j),
            static_cast<std::size_t>(j) < rank ? coeffs[j] : Rat(0));
    }
  return assignment;
}

}  // namespace fixtures
