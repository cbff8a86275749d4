#include "lmdp/reductions.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lmdp {

namespace {

std::string num(int i) { return std::to_string(i); }

void check_row_stochastic(const Matrix& x, const std::string& name) {
  for (int i = 0; i < x.rows(); ++i) {
    Rat sum(0);
    for (int j = 0; j < x.cols(); ++j) {
      if (x.at(i, j).sgn() < 0) {
        throw std::invalid_argument(name + " has a negative entry");
      }
      sum += x.at(i, j);
    }
    if (!(sum == Rat(1))) {
      throw std::invalid_argument(name + " is not row-stochastic");
    }
  }
}

}  // namespace

MdpQuery subsetsum_to_mdp(const SubsetSumInstance& inst) {
  const int n = static_cast<int>(inst.values.size());
  if (n == 0) throw std::invalid_argument("subset sum: empty value list");
  long total = 0;
  for (long v : inst.values) {
    if (v <= 0) throw std::invalid_argument("subset sum: values must be positive");
    total += v;
  }
  if (inst.target <= 0) throw std::invalid_argument("subset sum: target must be positive");
  if (inst.target > total) {
    throw std::invalid_argument(
        "subset sum: target exceeds the sum of all values, t's row would be negative");
  }

  MdpBuilder b;
  std::vector<std::pair<std::string, Rat>> srow;
  for (int i = 0; i < n; ++i) srow.emplace_back("s" + num(i + 1), Rat(inst.values[i], total));
  b.state("s", "a").action("m", std::move(srow));
  for (int i = 0; i < n; ++i) {
    b.state("s" + num(i + 1), "a")
        .action("m" + num(i + 1), {{"sa", Rat(1)}})
        .action("m" + num(i + 1) + "'", {{"sb", Rat(1)}});
  }
  b.state("sa", "a").action("m", {{"s", Rat(1)}});
  b.state("sb", "b").action("m", {{"s", Rat(1)}});

  std::vector<std::pair<std::string, Rat>> trow;
  trow.emplace_back("t1", Rat(inst.target, total));
  if (inst.target < total) trow.emplace_back("t2", Rat(total - inst.target, total));
  b.state("t", "a").action("m", std::move(trow));
  b.state("t1", "a").action("m", {{"ta", Rat(1)}});
  b.state("t2", "a").action("m", {{"tb", Rat(1)}});
  b.state("ta", "a").action("m", {{"t", Rat(1)}});
  b.state("tb", "b").action("m", {{"t", Rat(1)}});

  MdpQuery q;
  q.mdp = b.build();
  q.s = q.mdp.state_index("s");
  q.t = q.mdp.state_index("t");
  return q;
}

MdpQuery setsplit_to_mdp(const SetSplitInstance& inst) {
  if (inst.n_elements <= 0) throw std::invalid_argument("set splitting: empty ground set");
  if (inst.sets.empty()) throw std::invalid_argument("set splitting: empty collection");
  const int m = static_cast<int>(inst.sets.size());
  std::vector<std::set<int>> sets;
  for (const auto& raw : inst.sets) {
    std::set<int> set(raw.begin(), raw.end());
    if (set.empty()) throw std::invalid_argument("set splitting: empty set in the collection");
    for (int e : set) {
      if (e < 0 || e >= inst.n_elements) {
        throw std::invalid_argument("set splitting: element outside the ground set");
      }
    }
    sets.push_back(std::move(set));
  }

  MdpBuilder b;
  std::vector<std::pair<std::string, Rat>> srow, trow;
  for (int j = 0; j < m; ++j) {
    srow.emplace_back("C" + num(j + 1), Rat(1, m));
    trow.emplace_back("C" + num(j + 1) + "'", Rat(1, m));
  }
  b.state("s", "a").action("m", std::move(srow));
  b.state("t", "a").action("m", std::move(trow));
  for (int j = 0; j < m; ++j) {
    b.state("C" + num(j + 1), "a");
    for (int e : sets[j]) b.action("e" + num(e + 1), {{"e" + num(e + 1), Rat(1)}});
    b.state("C" + num(j + 1) + "'", "a");
    for (int e : sets[j]) b.action("e" + num(e + 1), {{"e" + num(e + 1), Rat(1)}});
  }
  for (int i = 0; i < inst.n_elements; ++i) {
    b.state("e" + num(i + 1), "a").action("u", {{"u", Rat(1)}}).action("v", {{"v", Rat(1)}});
  }
  b.state("u", "a").action("m", {{"u", Rat(1)}});
  b.state("v", "b").action("m", {{"v", Rat(1)}});

  MdpQuery q;
  q.mdp = b.build();
  q.s = q.mdp.state_index("s");
  q.t = q.mdp.state_index("t");
  return q;
}

MdpDistQuery nmf_to_mdp(const NmfInstance& inst) {
  const int n = inst.j.rows();
  const int m = inst.j.cols();
  if (n <= 0 || m <= 0) throw std::invalid_argument("nmf: empty matrix");
  if (inst.rank < 1) throw std::invalid_argument("nmf: inner dimension must be at least 1");
  check_row_stochastic(inst.j, "nmf: J");
  const int r = inst.rank;

  MdpBuilder b;
  // Left half, a chain: s fans out to the s_i, runs through s_i' whose row is
  // the i-th row of J, and returns from p_j.
  std::vector<std::pair<std::string, Rat>> srow;
  for (int i = 0; i < n; ++i) srow.emplace_back("s" + num(i + 1), Rat(1, n));
  b.state("s", "c").action("m", std::move(srow));
  for (int i = 0; i < n; ++i) {
    b.state("s" + num(i + 1), "a" + num(i + 1)).action("m", {{"s" + num(i + 1) + "'", Rat(1)}});
    std::vector<std::pair<std::string, Rat>> jrow;
    for (int jc = 0; jc < m; ++jc) {
      if (inst.j.at(i, jc).sgn() > 0) jrow.emplace_back("p" + num(jc + 1), inst.j.at(i, jc));
    }
    b.state("s" + num(i + 1) + "'", "c").action("m", std::move(jrow));
  }
  for (int jc = 0; jc < m; ++jc) {
    b.state("p" + num(jc + 1), "b" + num(jc + 1)).action("m", {{"s", Rat(1)}});
  }

  // Right half, the controlled side: each t_i picks one of the r relay states
  // t_k', each t_k' picks one of the m exits q_j.
  std::vector<std::pair<std::string, Rat>> trow;
  for (int i = 0; i < n; ++i) trow.emplace_back("t" + num(i + 1), Rat(1, n));
  b.state("t", "c").action("m", std::move(trow));
  for (int i = 0; i < n; ++i) {
    b.state("t" + num(i + 1), "a" + num(i + 1));
    for (int k = 0; k < r; ++k) {
      b.action("m" + num(i + 1) + "_" + num(k + 1), {{"t" + num(k + 1) + "'", Rat(1)}});
    }
  }
  for (int k = 0; k < r; ++k) {
    b.state("t" + num(k + 1) + "'", "c");
    for (int jc = 0; jc < m; ++jc) {
      b.action("m'" + num(k + 1) + "_" + num(jc + 1), {{"q" + num(jc + 1), Rat(1)}});
    }
  }
  for (int jc = 0; jc < m; ++jc) {
    b.state("q" + num(jc + 1), "b" + num(jc + 1)).action("m", {{"t", Rat(1)}});
  }

  Mdp mdp = b.build();
  const int si = mdp.state_index("s");
  const int ti = mdp.state_index("t");
  const int total = mdp.n();
  return MdpDistQuery{std::move(mdp), Dist::dirac(total, si), Dist::dirac(total, ti)};
}

Strategy strategy_from_factorization(const Mdp& mdp, const NmfInstance& inst, const Matrix& a,
                                     const Matrix& w) {
  const int n = inst.j.rows();
  const int m = inst.j.cols();
  const int r = inst.rank;
  if (a.rows() != n || a.cols() != r || w.rows() != r || w.cols() != m) {
    throw std::invalid_argument("factorization: factor shapes do not match the instance");
  }
  check_row_stochastic(a, "factorization: A");
  check_row_stochastic(w, "factorization: W");

  PartialStrategy part;
  part.w.assign(mdp.n(), std::nullopt);
  Strategy alpha = complete_with_first_action(mdp, part);
  for (int i = 0; i < n; ++i) {
    const int ti = mdp.state_index("t" + num(i + 1));
    std::vector<Rat> row(mdp.action_count(ti), Rat(0));
    for (int k = 0; k < r; ++k) {
      const int mi = mdp.find_action(ti, "m" + num(i + 1) + "_" + num(k + 1));
      if (mi < 0) throw std::invalid_argument("factorization: model lacks the expected actions");
      row[mi] = a.at(i, k);
    }
    alpha.w[ti] = std::move(row);
  }
  for (int k = 0; k < r; ++k) {
    const int tk = mdp.state_index("t" + num(k + 1) + "'");
    std::vector<Rat> row(mdp.action_count(tk), Rat(0));
    for (int jc = 0; jc < m; ++jc) {
      const int mi = mdp.find_action(tk, "m'" + num(k + 1) + "_" + num(jc + 1));
      if (mi < 0) throw std::invalid_argument("factorization: model lacks the expected actions");
      row[mi] = w.at(k, jc);
    }
    alpha.w[tk] = std::move(row);
  }
  validate_strategy(mdp, alpha);
  return alpha;
}

}  // namespace lmdp
