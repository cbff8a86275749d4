#include "lmdp/modelio.hpp"

#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lmdp {

const Mdp& ModelFile::as_mdp() const {
  if (!mdp) throw std::logic_error("model file does not hold an mdp");
  return *mdp;
}

const Lmc& ModelFile::as_lmc() const {
  if (!lmc) throw std::logic_error("model file does not hold an lmc");
  return *lmc;
}

namespace {

bool is_delim(char c) {
  return c == ':' || c == ',' || c == '{' || c == '}' || c == '#';
}

struct Line {
  int no = 0;
  std::string text;  // comment-stripped
};

std::vector<Line> content_lines(const std::string& text) {
  std::vector<Line> lines;
  int no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++no;
    std::string line = text.substr(pos, end - pos);
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank) lines.push_back({no, std::move(line)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

// Token scanner over a single content line, reporting 1-based columns.
struct Scanner {
  const Line& line;
  std::size_t pos = 0;

  explicit Scanner(const Line& l) : line(l) { skip_ws(); }

  int col() const { return static_cast<int>(pos) + 1; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line.no, col(), msg); }
  [[noreturn]] void fail_at(int at, const std::string& msg) const {
    throw ParseError(line.no, at, msg);
  }

  void skip_ws() {
    while (pos < line.text.size() && std::isspace(static_cast<unsigned char>(line.text[pos])))
      ++pos;
  }
  bool done() const { return pos >= line.text.size(); }
  char peek() const { return line.text[pos]; }

  void expect(char c) {
    if (done() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
    skip_ws();
  }

  std::string token(const char* what) {
    if (done() || is_delim(peek())) fail(std::string("expected ") + what);
    std::size_t start = pos;
    while (pos < line.text.size() && !std::isspace(static_cast<unsigned char>(line.text[pos])) &&
           !is_delim(line.text[pos]))
      ++pos;
    std::string t = line.text.substr(start, pos - start);
    skip_ws();
    return t;
  }

  Rat rational() {
    int at = col();
    std::string t = token("a rational");
    try {
      return Rat::parse(t);
    } catch (const std::exception&) {
      fail_at(at, "'" + t + "' is not a rational (use n or n/d; decimals are not allowed)");
    }
  }

  long integer(const char* what) {
    int at = col();
    std::string t = token(what);
    try {
      std::size_t used = 0;
      long v = std::stol(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail_at(at, "'" + t + "' is not an integer");
    }
  }

  void end() {
    if (!done()) fail("trailing input");
  }
};

struct NamedWeight {
  std::string name;
  Rat weight;
  int col = 0;
};

// "<id>:<rat>" pairs separated by commas, optionally brace-enclosed.
std::vector<NamedWeight> weight_list(Scanner& sc, bool braced) {
  std::vector<NamedWeight> entries;
  std::set<std::string> seen;
  if (braced) sc.expect('{');
  while (true) {
    NamedWeight e;
    e.col = sc.col();
    e.name = sc.token("a state id");
    if (!seen.insert(e.name).second) sc.fail_at(e.col, "duplicate state '" + e.name + "'");
    sc.expect(':');
    e.weight = sc.rational();
    entries.push_back(std::move(e));
    if (!sc.done() && sc.peek() == ',') {
      sc.expect(',');
      continue;
    }
    break;
  }
  if (braced) sc.expect('}');
  return entries;
}

std::vector<std::pair<std::string, Rat>> to_pairs(std::vector<NamedWeight> entries) {
  std::vector<std::pair<std::string, Rat>> out;
  out.reserve(entries.size());
  for (NamedWeight& e : entries) out.emplace_back(std::move(e.name), std::move(e.weight));
  return out;
}

struct RawQuery {
  Query::Kind kind = Query::Kind::None;
  std::vector<NamedWeight> mu, nu;  // Tv
  NamedWeight s, t;                 // Pb
  int line = 0;
};

Dist resolve_dist(const Mdp* mdp, const Lmc* lmc, const std::vector<NamedWeight>& entries,
                  int line) {
  const int n = mdp ? mdp->n() : lmc->n();
  std::vector<Rat> w(n);
  for (const NamedWeight& e : entries) {
    int idx = mdp ? mdp->find_state(e.name) : lmc->find_state(e.name);
    if (idx < 0) throw ParseError(line, e.col, "unknown state '" + e.name + "' in query");
    w[idx] = e.weight;
  }
  try {
    return Dist::distribution(std::move(w));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, 0, std::string("query distribution: ") + e.what());
  }
}

}  // namespace

ModelFile parse_model(const std::string& text) {
  std::vector<Line> lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty model: expected 'mdp' or 'lmc'");

  Scanner header(lines.front());
  std::string kind = header.token("'mdp' or 'lmc'");
  header.end();
  if (kind != "mdp" && kind != "lmc")
    throw ParseError(lines.front().no, 1, "expected 'mdp' or 'lmc', got '" + kind + "'");
  const bool is_mdp = kind == "mdp";

  MdpBuilder mdp_builder;
  LmcBuilder lmc_builder;
  int states = 0;
  int rows_for_current = 0;
  RawQuery raw;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    Scanner sc(lines[i]);
    int at = sc.col();
    std::string head = sc.token("'state', 'action' or 'query'");
    if (head == "state") {
      std::string id = sc.token("a state id");
      std::string kw = sc.token("'label'");
      if (kw != "label") sc.fail("expected 'label'");
      std::string label = sc.token("a label");
      sc.end();
      if (is_mdp)
        mdp_builder.state(id, label);
      else
        lmc_builder.state(id, label);
      ++states;
      rows_for_current = 0;
    } else if (head == "action") {
      if (states == 0) sc.fail_at(at, "action before any state");
      std::string name = sc.token("an action name");
      std::string arrow = sc.token("'->'");
      if (arrow != "->") sc.fail("expected '->'");
      std::vector<std::pair<std::string, Rat>> succ = to_pairs(weight_list(sc, false));
      sc.end();
      if (is_mdp) {
        mdp_builder.action(name, std::move(succ));
      } else {
        if (rows_for_current > 0) sc.fail_at(at, "an lmc state carries exactly one action row");
        lmc_builder.trans(std::move(succ));
      }
      ++rows_for_current;
    } else if (head == "query") {
      if (raw.kind != Query::Kind::None) sc.fail_at(at, "more than one query");
      raw.line = lines[i].no;
      std::string q = sc.token("'tv' or 'pb'");
      if (q == "tv") {
        raw.kind = Query::Kind::Tv;
        std::string kw = sc.token("'mu'");
        if (kw != "mu") sc.fail("expected 'mu'");
        raw.mu = weight_list(sc, true);
        kw = sc.token("'nu'");
        if (kw != "nu") sc.fail("expected 'nu'");
        raw.nu = weight_list(sc, true);
        sc.end();
      } else if (q == "pb") {
        raw.kind = Query::Kind::Pb;
        raw.s.col = sc.col();
        raw.s.name = sc.token("a state id");
        raw.t.col = sc.col();
        raw.t.name = sc.token("a state id");
        sc.end();
      } else {
        sc.fail_at(at, "unknown query kind '" + q + "'");
      }
    } else {
      sc.fail_at(at, "expected 'state', 'action' or 'query', got '" + head + "'");
    }
  }

  ModelFile f;
  if (is_mdp)
    f.mdp = mdp_builder.build();
  else
    f.lmc = lmc_builder.build();

  const Mdp* mdp = f.mdp ? &*f.mdp : nullptr;
  const Lmc* lmc = f.lmc ? &*f.lmc : nullptr;
  f.query.kind = raw.kind;
  if (raw.kind == Query::Kind::Tv) {
    f.query.mu = resolve_dist(mdp, lmc, raw.mu, raw.line);
    f.query.nu = resolve_dist(mdp, lmc, raw.nu, raw.line);
  } else if (raw.kind == Query::Kind::Pb) {
    for (const NamedWeight* e : {&raw.s, &raw.t}) {
      int idx = mdp ? mdp->find_state(e->name) : lmc->find_state(e->name);
      if (idx < 0) throw ParseError(raw.line, e->col, "unknown state '" + e->name + "' in query");
      (e == &raw.s ? f.query.s : f.query.t) = idx;
    }
  }
  return f;
}

namespace {

std::string dist_text(const std::vector<std::string>& names, const Dist& d) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < d.size(); ++i) {
    if (d[i].is_zero()) continue;
    if (!first) out += ", ";
    out += names[i] + ":" + d[i].str();
    first = false;
  }
  return out + "}";
}

std::string row_text(const std::vector<std::string>& names, const std::vector<Rat>& row) {
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i].is_zero()) continue;
    if (!first) out += ", ";
    out += names[i] + ":" + row[i].str();
    first = false;
  }
  return out;
}

}  // namespace

std::string serialize_model(const ModelFile& f) {
  std::string out;
  std::vector<std::string> names;
  if (f.is_mdp()) {
    const Mdp& d = f.as_mdp();
    names = d.state_names();
    out += "mdp\n";
    for (int s = 0; s < d.n(); ++s) {
      out += "state " + d.state_name(s) + " label " + d.label(s) + "\n";
      for (int m = 0; m < d.action_count(s); ++m)
        out += "  action " + d.action_name(s, m) + " -> " + row_text(names, d.action_row(s, m)) +
               "\n";
    }
  } else {
    const Lmc& c = f.as_lmc();
    names = c.state_names();
    out += "lmc\n";
    for (int s = 0; s < c.n(); ++s) {
      out += "state " + c.state_name(s) + " label " + c.label(s) + "\n";
      out += "  action m -> " + row_text(names, c.row(s)) + "\n";
    }
  }
  if (f.query.kind == Query::Kind::Tv) {
    out += "query tv mu " + dist_text(names, *f.query.mu) + " nu " + dist_text(names, *f.query.nu) +
           "\n";
  } else if (f.query.kind == Query::Kind::Pb) {
    out += "query pb " + names[f.query.s] + " " + names[f.query.t] + "\n";
  }
  return out;
}

Instance parse_instance(const std::string& text) {
  std::vector<Line> lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty instance: expected 'subsetsum', 'setsplit' or 'nmf'");

  Scanner header(lines.front());
  std::string kind = header.token("an instance kind");
  header.end();

  if (kind == "subsetsum") {
    std::vector<long> values;
    bool have_values = false, have_target = false;
    long target = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      Scanner sc(lines[i]);
      int at = sc.col();
      std::string head = sc.token("'values' or 'target'");
      if (head == "values") {
        if (have_values) sc.fail_at(at, "duplicate 'values'");
        have_values = true;
        while (!sc.done()) values.push_back(sc.integer("a value"));
        if (values.empty()) sc.fail("expected at least one value");
      } else if (head == "target") {
        if (have_target) sc.fail_at(at, "duplicate 'target'");
        have_target = true;
        target = sc.integer("the target");
        sc.end();
      } else {
        sc.fail_at(at, "expected 'values' or 'target', got '" + head + "'");
      }
    }
    if (!have_values) throw ParseError(lines.front().no, 1, "missing 'values' line");
    if (!have_target) throw ParseError(lines.front().no, 1, "missing 'target' line");
    return SubsetSumInstance{std::move(values), target};
  }

  if (kind == "setsplit") {
    int n_elements = -1;
    std::vector<std::vector<int>> sets;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      Scanner sc(lines[i]);
      int at = sc.col();
      std::string head = sc.token("'elements' or 'set'");
      if (head == "elements") {
        if (n_elements >= 0) sc.fail_at(at, "duplicate 'elements'");
        n_elements = static_cast<int>(sc.integer("the element count"));
        sc.end();
      } else if (head == "set") {
        std::vector<int> set;
        while (!sc.done()) {
          int tok_at = sc.col();
          std::string t = sc.token("an element like e1");
          if (t.size() < 2 || t[0] != 'e') sc.fail_at(tok_at, "expected an element like e1");
          int k = 0;
          for (std::size_t j = 1; j < t.size(); ++j) {
            if (!std::isdigit(static_cast<unsigned char>(t[j])))
              sc.fail_at(tok_at, "expected an element like e1");
            k = k * 10 + (t[j] - '0');
          }
          if (k < 1) sc.fail_at(tok_at, "elements are numbered from e1");
          set.push_back(k - 1);
        }
        if (set.empty()) sc.fail("expected at least one element");
        sets.push_back(std::move(set));
      } else {
        sc.fail_at(at, "expected 'elements' or 'set', got '" + head + "'");
      }
    }
    if (n_elements < 0) throw ParseError(lines.front().no, 1, "missing 'elements' line");
    return SetSplitInstance{n_elements, std::move(sets)};
  }

  if (kind == "nmf") {
    int rank = -1;
    std::vector<std::vector<Rat>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      Scanner sc(lines[i]);
      int at = sc.col();
      std::string head = sc.token("'rank' or 'row'");
      if (head == "rank") {
        if (rank >= 0) sc.fail_at(at, "duplicate 'rank'");
        rank = static_cast<int>(sc.integer("the rank"));
        sc.end();
      } else if (head == "row") {
        std::vector<Rat> row;
        while (!sc.done()) row.push_back(sc.rational());
        if (row.empty()) sc.fail("expected at least one entry");
        if (!rows.empty() && rows.front().size() != row.size())
          sc.fail_at(at, "matrix rows must all have the same width");
        rows.push_back(std::move(row));
      } else {
        sc.fail_at(at, "expected 'rank' or 'row', got '" + head + "'");
      }
    }
    if (rank < 0) throw ParseError(lines.front().no, 1, "missing 'rank' line");
    if (rows.empty()) throw ParseError(lines.front().no, 1, "missing 'row' lines");
    Matrix j(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int r = 0; r < j.rows(); ++r)
      for (int c = 0; c < j.cols(); ++c) j.at(r, c) = rows[r][c];
    return NmfInstance{rank, std::move(j)};
  }

  throw ParseError(lines.front().no, 1,
                   "expected 'subsetsum', 'setsplit' or 'nmf', got '" + kind + "'");
}

}  // namespace lmdp
