#include "lmdp/run.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lmdp/bisim.hpp"
#include "lmdp/common.hpp"
#include "lmdp/distance.hpp"
#include "lmdp/etr.hpp"
#include "lmdp/model.hpp"
#include "lmdp/reductions.hpp"
#include "lmdp/trace.hpp"

namespace lmdp {

std::optional<Problem> problem_from_tag(const std::string& tag) {
  static const std::map<std::string, Problem> tags = {
      {"TV>0", Problem::TvGt0}, {"tv_gt0", Problem::TvGt0},  //
      {"PB>0", Problem::PbGt0}, {"pb_gt0", Problem::PbGt0},  //
      {"PB=0", Problem::PbEq0}, {"pb_eq0", Problem::PbEq0},  //
      {"PB=1", Problem::PbEq1}, {"pb_eq1", Problem::PbEq1},  //
      {"PB<1", Problem::PbLt1}, {"pb_lt1", Problem::PbLt1},  //
      {"TV=0", Problem::TvEq0}, {"tv_eq0", Problem::TvEq0},  //
      {"TV<1", Problem::TvLt1}, {"tv_lt1", Problem::TvLt1},  //
      {"TV=1", Problem::TvEq1}, {"tv_eq1", Problem::TvEq1},
  };
  auto it = tags.find(tag);
  if (it == tags.end()) return std::nullopt;
  return it->second;
}

std::string problem_tag(Problem p) {
  switch (p) {
    case Problem::TvGt0: return "TV>0";
    case Problem::PbGt0: return "PB>0";
    case Problem::PbEq0: return "PB=0";
    case Problem::PbEq1: return "PB=1";
    case Problem::PbLt1: return "PB<1";
    case Problem::TvEq0: return "TV=0";
    case Problem::TvLt1: return "TV<1";
    case Problem::TvEq1: return "TV=1";
  }
  throw std::logic_error("unreachable problem tag");
}

namespace {

const char* problem_slug(Problem p) {
  switch (p) {
    case Problem::TvGt0: return "tv_gt0";
    case Problem::PbGt0: return "pb_gt0";
    case Problem::PbEq0: return "pb_eq0";
    case Problem::PbEq1: return "pb_eq1";
    case Problem::PbLt1: return "pb_lt1";
    case Problem::TvEq0: return "tv_eq0";
    case Problem::TvLt1: return "tv_lt1";
    case Problem::TvEq1: return "tv_eq1";
  }
  throw std::logic_error("unreachable problem slug");
}

// The three total-variation existence problems may answer unknown (one-sided
// screen); their tag carries a star in the verdict.  The other five never do.
bool may_answer_unknown(Problem p) {
  return p == Problem::TvEq0 || p == Problem::TvLt1 || p == Problem::TvEq1;
}

bool takes_tv_query(Problem p) {
  return p == Problem::TvGt0 || p == Problem::TvEq0 || p == Problem::TvLt1 || p == Problem::TvEq1;
}

// A chain file is treated as the one-action decision process it is.
Mdp lift_model(const ModelFile& file) {
  if (file.is_mdp()) return file.as_mdp();
  const Lmc& lmc = file.as_lmc();
  MdpBuilder builder;
  for (int s = 0; s < lmc.n(); ++s) {
    builder.state(lmc.state_name(s), lmc.label(s));
    std::vector<std::pair<std::string, Rat>> succ;
    for (int t = 0; t < lmc.n(); ++t)
      if (!lmc.row(s)[t].is_zero()) succ.emplace_back(lmc.state_name(t), lmc.row(s)[t]);
    builder.action("m", std::move(succ));
  }
  for (const std::string& l : lmc.labels()) builder.declare_label(l);
  return builder.build();
}

struct SplitMix {
  std::uint64_t x;
  explicit SplitMix(std::uint64_t seed) : x(seed) {}
  std::uint64_t next() {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

// Full-support random strategy with small integer odds per action.
Strategy random_positive_strategy(const Mdp& mdp, SplitMix& rng) {
  Strategy alpha;
  alpha.w.resize(mdp.n());
  for (int s = 0; s < mdp.n(); ++s) {
    std::vector<Rat> odds;
    Rat total(0);
    for (int m = 0; m < mdp.action_count(s); ++m) {
      Rat c(static_cast<long>(1 + rng.next() % 9));
      odds.push_back(c);
      total += c;
    }
    for (Rat& c : odds) c /= total;
    alpha.w[s] = std::move(odds);
  }
  return alpha;
}

constexpr int kOracleSamples = 32;

struct SampleScan {
  int hits = 0;
  std::optional<Strategy> first;  // first strategy satisfying the predicate
};

template <typename Pred>
SampleScan sample_scan(const Mdp& mdp, std::uint64_t seed, Pred&& holds) {
  SplitMix rng(seed);
  SampleScan scan;
  for (int i = 0; i < kOracleSamples; ++i) {
    Strategy alpha = random_positive_strategy(mdp, rng);
    if (holds(alpha)) {
      ++scan.hits;
      if (!scan.first) scan.first = alpha;
    }
  }
  return scan;
}

void verify_or_die(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("internal error: witness failed re-verification: " + what);
}

std::string strategy_block(const Mdp& mdp, const Strategy& alpha) {
  std::ostringstream os;
  os << "witness strategy:\n";
  for (int s = 0; s < mdp.n(); ++s) {
    os << "  " << mdp.state_name(s) << ":";
    for (int m = 0; m < mdp.action_count(s); ++m)
      os << (m ? ", " : " ") << mdp.action_name(s, m) << ":" << alpha.w[s][m].str();
    os << "\n";
  }
  return os.str();
}

std::string word_line(const Word& w) {
  std::ostringstream os;
  os << "witness word:";
  if (w.empty()) {
    os << " (empty)";
  } else {
    for (const std::string& a : w) os << " " << a;
  }
  os << "\n";
  return os.str();
}

// Answer plus the verdict blocks below the four header lines.
struct Outcome {
  Answer answer = Answer::Unknown;
  std::string witness;                 // zero or more complete lines
  std::vector<std::string> evidence;   // one entry per evidence bullet
};

std::string oracle_note(std::uint64_t seed, int hits, const std::string& property) {
  std::ostringstream os;
  os << "oracle: " << kOracleSamples << " seeded random strategies (seed " << seed << "), " << hits
     << " " << property;
  return os.str();
}

Outcome run_tv_gt0(const Mdp& mdp, const Dist& mu, const Dist& nu, const RunFlags& flags) {
  Outcome out;
  TvGt0Result r = tv_gt0(mdp, mu, nu);
  out.answer = r.answer;
  std::ostringstream basis;
  basis << "md basis vectors: " << r.basis_size;
  out.evidence.push_back(basis.str());
  if (r.answer == Answer::Yes) {
    Strategy full = strategy_from_md(mdp, *r.strategy);
    out.witness = strategy_block(mdp, full) + word_line(*r.word);
    Lmc chain = induce(mdp, full);
    Rat pm = word_prob(chain, mu, *r.word);
    Rat pn = word_prob(chain, nu, *r.word);
    verify_or_die(pm != pn, "separating word gives equal probabilities");
    out.evidence.push_back("verified: the witness word has probability " + pm.str() +
                           " from mu and " + pn.str() + " from nu on the induced chain");
  } else {
    out.evidence.push_back(
        "the basis spans every strategy-word vector: mu and nu agree under all strategies");
  }
  if (flags.oracle) {
    BruteTvResult b = brute_oracle_tv_gt0(mdp, mu, nu, flags.guard);
    if (b.separated != (r.answer == Answer::Yes))
      throw std::logic_error("internal error: exhaustive cross-check disagrees");
    out.evidence.push_back(std::string("oracle: exhaustive strategy-word search agrees (") +
                           (b.separated ? "separated" : "not separated") + ")");
  }
  return out;
}

Outcome run_pb_gt0(const Mdp& mdp, int s, int t, const RunFlags& flags) {
  Outcome out;
  PbGt0Result r = pb_gt0(mdp, s, t);
  out.answer = r.answer;
  const std::string& sn = mdp.state_name(s);
  const std::string& tn = mdp.state_name(t);
  if (r.answer == Answer::Yes) {
    out.witness = strategy_block(mdp, *r.witness);
    Partition pi = lmc_bisim(induce(mdp, *r.witness));
    verify_or_die(!pi.same_block(s, t), "pair still bisimilar under the witness");
    out.evidence.push_back("verified: " + sn + " and " + tn +
                           " lie in different bisimilarity blocks of the induced chain");
    std::ostringstream blocks;
    blocks << "induced chain bisimilarity blocks: " << pi.size();
    out.evidence.push_back(blocks.str());
    out.evidence.push_back(strategy_randomizes(mdp, *r.witness) ? "the witness randomizes"
                                                                : "the witness is deterministic");
  } else {
    out.evidence.push_back("the minimizing induced chain already identifies " + sn + " and " + tn);
  }
  if (flags.oracle) {
    SampleScan scan = sample_scan(mdp, flags.seed, [&](const Strategy& alpha) {
      return !lmc_bisim(induce(mdp, alpha)).same_block(s, t);
    });
    if (r.answer == Answer::No && scan.hits != 0)
      throw std::logic_error("internal error: sampling found a separating strategy after a no");
    out.evidence.push_back(oracle_note(flags.seed, scan.hits, "separate the pair"));
  }
  return out;
}

Outcome run_pb_search(Problem problem, const Mdp& mdp, int s, int t, const RunFlags& flags) {
  Outcome out;
  StrategySearchResult r;
  switch (problem) {
    case Problem::PbEq0: r = pb_eq0(mdp, s, t, flags.guard); break;
    case Problem::PbEq1: r = pb_eq1(mdp, s, t, flags.guard); break;
    default: r = pb_lt1(mdp, s, t, flags.guard); break;
  }
  out.answer = r.answer;
  const std::string& sn = mdp.state_name(s);
  const std::string& tn = mdp.state_name(t);
  std::ostringstream work;
  work << "candidates enumerated: " << r.candidates;
  out.evidence.push_back(work.str());
  if (r.answer == Answer::Yes) {
    out.witness = strategy_block(mdp, *r.witness);
    Lmc chain = induce(mdp, *r.witness);
    switch (problem) {
      case Problem::PbEq0:
        verify_or_die(lmc_bisim(chain).same_block(s, t), "pair not bisimilar under the witness");
        out.evidence.push_back("verified: the induced chain makes " + sn + " and " + tn +
                               " bisimilar (distance zero)");
        break;
      case Problem::PbEq1:
        verify_or_die(lmc_pb_eq1(chain, s, t), "pair below distance one under the witness");
        out.evidence.push_back("verified: the induced chain keeps " + sn + " and " + tn +
                               " at distance one");
        break;
      default:
        verify_or_die(!lmc_pb_eq1(chain, s, t), "pair at distance one under the witness");
        out.evidence.push_back("verified: the induced chain brings " + sn + " and " + tn +
                               " below distance one");
        break;
    }
  } else {
    out.evidence.push_back("complete search: no strategy achieves it");
  }
  if (flags.oracle) {
    auto achieves = [&](const Strategy& alpha) {
      Lmc chain = induce(mdp, alpha);
      switch (problem) {
        case Problem::PbEq0: return lmc_bisim(chain).same_block(s, t);
        case Problem::PbEq1: return lmc_pb_eq1(chain, s, t);
        default: return !lmc_pb_eq1(chain, s, t);
      }
    };
    SampleScan scan = sample_scan(mdp, flags.seed, achieves);
    if (r.answer == Answer::No && scan.hits != 0)
      throw std::logic_error("internal error: sampling found an achieving strategy after a no");
    const char* property = problem == Problem::PbEq0   ? "make the pair bisimilar"
                           : problem == Problem::PbEq1 ? "keep the pair at distance one"
                                                       : "bring the pair below distance one";
    out.evidence.push_back(oracle_note(flags.seed, scan.hits, property));
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << text;
}

// Words over the label universe in length-lex order, lengths 1..max_len.
// Counts saturate; the emission guard fires long before saturation matters.
constexpr std::uint64_t kCountCap = ~0ull / 4;

std::vector<std::uint64_t> word_count_cum(std::uint64_t n_labels, int max_len) {
  std::vector<std::uint64_t> cum(static_cast<std::size_t>(max_len) + 1, 0);
  std::uint64_t power = 1;
  for (int l = 1; l <= max_len; ++l) {
    power = (power > kCountCap / std::max<std::uint64_t>(n_labels, 1)) ? kCountCap
                                                                       : power * n_labels;
    cum[l] = (cum[l - 1] > kCountCap - power) ? kCountCap : cum[l - 1] + power;
  }
  return cum;
}

Word word_at(const std::vector<std::string>& labels, const std::vector<std::uint64_t>& cum,
             std::uint64_t index) {
  int len = 1;
  while (index >= cum[len]) ++len;
  std::uint64_t offset = index - cum[len - 1];
  Word w(len);
  std::uint64_t base = labels.size();
  for (int p = len - 1; p >= 0; --p) {
    w[p] = labels[static_cast<std::size_t>(offset % base)];
    offset /= base;
  }
  return w;
}

std::uint64_t emit_formulas(const Mdp& mdp, Problem problem, const Dist& mu, const Dist& nu,
                            const RunFlags& flags) {
  std::filesystem::path dir(flags.emit_dir);
  std::filesystem::create_directories(dir);
  std::uint64_t count = 0;
  auto emit = [&](const EtrFormula& f) {
    ++count;
    if (count > flags.guard) throw GuardExceeded("formula guess enumeration", flags.guard);
    std::ostringstream name;
    name << problem_slug(problem) << "_g" << (count - 1) << ".smt2";
    write_text_file(dir / name.str(), f.smtlib());
  };
  switch (problem) {
    case Problem::TvEq0: {
      emit(encode_tv_eq0(mdp, mu, nu));
      break;
    }
    case Problem::TvLt1: {
      // Guess the witness state r1 and the support of the second
      // subdistribution among the partners r1 can reach in lockstep with it.
      ReachablePairs rp = reachable_pairs(induce(mdp, uniform_strategy(mdp)), mu, nu);
      for (int r1 = 0; r1 < mdp.n(); ++r1) {
        const std::vector<int>& partners = rp.proj[r1];
        if (partners.size() >= 60) throw GuardExceeded("formula guess enumeration", flags.guard);
        for (std::uint64_t mask = 0; mask < (1ull << partners.size()); ++mask) {
          std::vector<int> supp2;
          for (std::size_t i = 0; i < partners.size(); ++i)
            if (mask & (1ull << i)) supp2.push_back(partners[i]);
          emit(encode_tv_lt1(mdp, mu, nu, r1, supp2));
        }
      }
      break;
    }
    default: {
      // Guess basis word lists: r - 1 distinct nonempty words of length at
      // most |S|, taken in length-lex order, for every basis dimension r.
      int n = mdp.n();
      const std::vector<std::string>& labels = mdp.labels();
      std::vector<std::uint64_t> cum = word_count_cum(labels.size(), n);
      std::uint64_t universe = cum[n];
      for (int r = 1; r <= n; ++r) {
        std::uint64_t k = static_cast<std::uint64_t>(r) - 1;
        if (k > universe) continue;
        if (k == 0) {
          emit(encode_tv_eq1(mdp, mu, nu, {}, n - r));
          continue;
        }
        std::vector<std::uint64_t> ix(k);
        std::iota(ix.begin(), ix.end(), 0);
        while (true) {
          std::vector<Word> words;
          for (std::uint64_t i : ix) words.push_back(word_at(labels, cum, i));
          emit(encode_tv_eq1(mdp, mu, nu, words, n - r));
          auto j = static_cast<long>(k) - 1;
          while (j >= 0 && ix[j] == universe - (k - static_cast<std::uint64_t>(j))) --j;
          if (j < 0) break;
          ++ix[j];
          for (auto l = static_cast<std::uint64_t>(j) + 1; l < k; ++l) ix[l] = ix[l - 1] + 1;
        }
      }
      break;
    }
  }
  return count;
}

Outcome run_tv_screen(Problem problem, const Mdp& mdp, const Dist& mu, const Dist& nu,
                      const RunFlags& flags) {
  Outcome out;
  TvProblem tvp = problem == Problem::TvEq0   ? TvProblem::Eq0
                  : problem == Problem::TvLt1 ? TvProblem::Lt1
                                              : TvProblem::Eq1;
  auto holds = [&](const Strategy& alpha) {
    Lmc chain = induce(mdp, alpha);
    switch (tvp) {
      case TvProblem::Eq0: return lmc_trace_equiv(chain, mu, nu);
      case TvProblem::Lt1: return lmc_tv_lt1(chain, mu, nu);
      default: return !lmc_tv_lt1(chain, mu, nu);
    }
  };
  MdScreenResult r = md_underapprox(mdp, tvp, mu, nu, flags.guard);
  out.answer = r.answer;
  std::optional<Strategy> witness;
  if (r.witness) witness = strategy_from_md(mdp, *r.witness);
  std::ostringstream tried;
  tried << "md strategies tried: " << r.tried;
  out.evidence.push_back(tried.str());
  if (out.answer == Answer::Unknown && flags.oracle) {
    SampleScan scan = sample_scan(mdp, flags.seed, holds);
    if (scan.first) {
      out.answer = Answer::Yes;
      witness = scan.first;
      out.evidence.push_back(oracle_note(flags.seed, scan.hits, "achieve it; taking the first"));
    } else {
      out.evidence.push_back(oracle_note(flags.seed, 0, "achieve it"));
    }
  }
  if (out.answer == Answer::Yes) {
    out.witness = strategy_block(mdp, *witness);
    verify_or_die(holds(*witness), "screen witness does not satisfy the property");
    switch (tvp) {
      case TvProblem::Eq0:
        out.evidence.push_back(
            "verified: the induced chain makes mu and nu trace equivalent (distance zero)");
        break;
      case TvProblem::Lt1:
        out.evidence.push_back("verified: the induced chain keeps total variation below one");
        break;
      default:
        out.evidence.push_back("verified: the induced chain drives total variation to one");
        break;
    }
  } else {
    out.evidence.push_back("one-sided screen: unknown is not a refutation");
  }
  if (!flags.emit_dir.empty()) {
    std::uint64_t files = emit_formulas(mdp, problem, mu, nu, flags);
    std::ostringstream note;
    note << "formulas: " << files << " guess files written to " << flags.emit_dir;
    out.evidence.push_back(note.str());
  }
  return out;
}

}  // namespace

RunOutput run(const ModelFile& file, Problem problem, const RunFlags& flags) {
  Mdp mdp = lift_model(file);
  const Query& query = file.query;
  if (takes_tv_query(problem)) {
    if (query.kind != Query::Kind::Tv)
      throw std::invalid_argument("problem " + problem_tag(problem) +
                                  " needs a 'query tv' line in the model file");
  } else if (query.kind != Query::Kind::Pb) {
    throw std::invalid_argument("problem " + problem_tag(problem) +
                                " needs a 'query pb' line in the model file");
  }

  RunOutput out;
  std::ostringstream os;
  std::string tag = problem_tag(problem) + (may_answer_unknown(problem) ? "*" : "");
  try {
    Outcome res;
    switch (problem) {
      case Problem::TvGt0: res = run_tv_gt0(mdp, *query.mu, *query.nu, flags); break;
      case Problem::PbGt0: res = run_pb_gt0(mdp, query.s, query.t, flags); break;
      case Problem::PbEq0:
      case Problem::PbEq1:
      case Problem::PbLt1: res = run_pb_search(problem, mdp, query.s, query.t, flags); break;
      default: res = run_tv_screen(problem, mdp, *query.mu, *query.nu, flags); break;
    }
    out.answer = res.answer;
    os << "problem: " << tag << "\n";
    os << "answer: " << answer_str(res.answer) << "\n";
    os << "guard: " << flags.guard << "\n";
    os << "seed: " << flags.seed << "\n";
    os << res.witness;
    if (!res.evidence.empty()) {
      os << "evidence:\n";
      for (const std::string& line : res.evidence) os << "  - " << line << "\n";
    }
    out.exit_code = 0;
  } catch (const GuardExceeded& g) {
    out.answer = Answer::Unknown;
    out.exit_code = 3;
    os.str("");
    os << "problem: " << tag << "\n";
    os << "guard-exceeded: " << g.what() << "\n";
    os << "guard: " << flags.guard << "\n";
    os << "seed: " << flags.seed << "\n";
  }
  out.text = os.str();
  return out;
}

namespace {

template <class... Ts>
struct Overloads : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloads(Ts...) -> Overloads<Ts...>;

}  // namespace

std::string generate_model_text(const Instance& inst) {
  ModelFile file;
  std::visit(Overloads{
                 [&](const SubsetSumInstance& ss) {
                   MdpQuery q = subsetsum_to_mdp(ss);
                   file.mdp = std::move(q.mdp);
                   file.query.kind = Query::Kind::Pb;
                   file.query.s = q.s;
                   file.query.t = q.t;
                 },
                 [&](const SetSplitInstance& sp) {
                   MdpQuery q = setsplit_to_mdp(sp);
                   file.mdp = std::move(q.mdp);
                   file.query.kind = Query::Kind::Pb;
                   file.query.s = q.s;
                   file.query.t = q.t;
                 },
                 [&](const NmfInstance& nm) {
                   MdpDistQuery q = nmf_to_mdp(nm);
                   file.mdp = std::move(q.mdp);
                   file.query.kind = Query::Kind::Tv;
                   file.query.mu = std::move(q.mu);
                   file.query.nu = std::move(q.nu);
                 },
             },
             inst);
  return serialize_model(file);
}

}  // namespace lmdp
