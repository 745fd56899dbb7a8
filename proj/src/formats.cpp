#include "q2mpc/formats.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace q2mpc {

namespace {

// One effective (comment-stripped, non-blank) line with token extraction
// that remembers where each token started.
struct LineScanner {
  std::string text;
  int line_no = 0;
  size_t pos = 0;
  int last_col = 1;

  bool at_end() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    return pos >= text.size();
  }

  std::string token(const char* what) {
    if (at_end()) throw ParseError(std::string("expected ") + what, line_no, (int)pos + 1);
    last_col = (int)pos + 1;
    size_t start = pos;
    while (pos < text.size() && !std::isspace((unsigned char)text[pos])) ++pos;
    return text.substr(start, pos - start);
  }

  uint64_t number(const char* what) {
    std::string t = token(what);
    uint64_t v = 0;
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError(std::string("expected ") + what + ", got '" + t + "'", line_no, last_col);
    for (char ch : t) {
      if (v > (UINT64_MAX - (uint64_t)(ch - '0')) / 10)
        throw ParseError(std::string(what) + " out of range", line_no, last_col);
      v = v * 10 + (uint64_t)(ch - '0');
    }
    return v;
  }

  void finish() {
    if (!at_end()) throw ParseError("trailing tokens", line_no, (int)pos + 1);
  }
};

// Yields effective lines of `text` one at a time.
struct Lines {
  std::istringstream in;
  int line_no = 0;
  explicit Lines(const std::string& text) : in(text) {}

  bool next(LineScanner& out) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.resize(hash);
      size_t end = raw.find_last_not_of(" \t\r");
      raw.resize(end == std::string::npos ? 0 : end + 1);
      if (raw.find_first_not_of(" \t") == std::string::npos) continue;
      out = LineScanner{raw, line_no, 0, 1};
      return true;
    }
    return false;
  }
};

uint64_t parse_field_header(Lines& lines, LineScanner& ln) {
  if (!lines.next(ln)) throw ParseError("missing 'field' line", 1, 1);
  if (ln.token("'field'") != "field")
    throw ParseError("first directive must be 'field'", ln.line_no, ln.last_col);
  uint64_t q = ln.number("modulus");
  ln.finish();
  return q;
}

int parse_owner(LineScanner& ln) {
  std::string t = ln.token("owner (P<idx>)");
  if (t.size() < 2 || t.size() > 8 || t[0] != 'P' ||
      t.find_first_not_of("0123456789", 1) != std::string::npos)
    throw ParseError("expected owner of the form P<idx>, got '" + t + "'", ln.line_no,
                     ln.last_col);
  return (int)std::stoull(t.substr(1));
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
  Lines lines(text);
  LineScanner ln;
  Circuit c;
  c.q = parse_field_header(lines, ln);
  Field f(c.q);
  while (lines.next(ln)) {
    std::string dir = ln.token("directive");
    Gate g;
    if (dir == "in") {
      g.kind = GateKind::input;
      g.out = ln.token("wire");
      g.owner = parse_owner(ln);
    } else if (dir == "cadd" || dir == "smul") {
      g.kind = dir == "cadd" ? GateKind::const_add : GateKind::scalar_mul;
      g.out = ln.token("wire");
      g.lambda = f.fe(ln.number("coefficient"));
      g.in1 = ln.token("wire");
    } else if (dir == "add" || dir == "mul") {
      g.kind = dir == "add" ? GateKind::add : GateKind::mul;
      g.out = ln.token("wire");
      g.in1 = ln.token("wire");
      g.in2 = ln.token("wire");
    } else if (dir == "out") {
      g.kind = GateKind::output;
      g.out = ln.token("wire");
    } else {
      throw ParseError("unknown directive '" + dir + "'", ln.line_no, 1);
    }
    ln.finish();
    c.gates.push_back(std::move(g));
  }
  return c;
}

std::string serialize(const Circuit& c) {
  std::ostringstream out;
  out << "field " << c.q << "\n";
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::input: out << "in " << g.out << " P" << g.owner; break;
      case GateKind::const_add: out << "cadd " << g.out << " " << g.lambda.v << " " << g.in1; break;
      case GateKind::scalar_mul: out << "smul " << g.out << " " << g.lambda.v << " " << g.in1; break;
      case GateKind::add: out << "add " << g.out << " " << g.in1 << " " << g.in2; break;
      case GateKind::mul: out << "mul " << g.out << " " << g.in1 << " " << g.in2; break;
      case GateKind::output: out << "out " << g.out; break;
    }
    out << "\n";
  }
  return out.str();
}

Msp parse_msp(const std::string& text) {
  Lines lines(text);
  LineScanner ln;
  uint64_t q = parse_field_header(lines, ln);
  Field f(q);

  if (!lines.next(ln)) throw ParseError("missing 'matrix' line", lines.line_no + 1, 1);
  if (ln.token("'matrix'") != "matrix")
    throw ParseError("expected 'matrix'", ln.line_no, ln.last_col);
  uint64_t d = ln.number("row count");
  uint64_t e = ln.number("column count");
  ln.finish();
  if (d == 0 || e == 0) throw ParseError("matrix must be nonempty", ln.line_no, 1);

  Matrix m;
  for (uint64_t r = 0; r < d; ++r) {
    if (!lines.next(ln))
      throw ParseError("expected matrix row " + std::to_string(r + 1), lines.line_no + 1, 1);
    Row row;
    for (uint64_t cidx = 0; cidx < e; ++cidx) row.push_back(f.fe(ln.number("matrix entry")));
    ln.finish();
    m.push_back(std::move(row));
  }

  if (!lines.next(ln)) throw ParseError("missing 'owners' line", lines.line_no + 1, 1);
  if (ln.token("'owners'") != "owners")
    throw ParseError("expected 'owners'", ln.line_no, ln.last_col);
  std::vector<int> owners;
  int n = 0;
  for (uint64_t r = 0; r < d; ++r) {
    uint64_t o = ln.number("owner index");
    if (o > 1000000) throw ParseError("owner index out of range", ln.line_no, ln.last_col);
    owners.push_back((int)o);
    n = std::max(n, (int)o + 1);
  }
  ln.finish();
  if (lines.next(ln)) throw ParseError("unexpected extra line", ln.line_no, 1);
  return Msp(f, std::move(m), std::move(owners), n);
}

std::string serialize(const Msp& m) {
  std::ostringstream out;
  out << "field " << m.field().modulus() << "\n";
  out << "matrix " << m.rows() << " " << m.cols() << "\n";
  for (const Row& row : m.matrix()) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i].v;
    out << "\n";
  }
  out << "owners";
  for (int o : m.owners()) out << " " << o;
  out << "\n";
  return out.str();
}

AdversaryStructure parse_structure(const std::string& text) {
  Lines lines(text);
  LineScanner ln;
  if (!lines.next(ln)) throw ParseError("missing 'players' line", 1, 1);
  if (ln.token("'players'") != "players")
    throw ParseError("first directive must be 'players'", ln.line_no, ln.last_col);
  uint64_t n = ln.number("player count");
  ln.finish();
  if (n == 0 || n > 1000000) throw ParseError("player count out of range", ln.line_no, 1);

  std::vector<PlayerSet> sets;
  while (lines.next(ln)) {
    PlayerSet s;
    while (!ln.at_end()) {
      uint64_t p = ln.number("player index");
      if (p >= n) throw ParseError("player index past the player count", ln.line_no, ln.last_col);
      s.insert((int)p);
    }
    sets.push_back(std::move(s));
  }
  return AdversaryStructure((int)n, std::move(sets));
}

std::string serialize(const AdversaryStructure& s) {
  std::ostringstream out;
  out << "players " << s.n() << "\n";
  for (const PlayerSet& b : s.maximal()) {
    bool first = true;
    for (int p : b) {
      out << (first ? "" : " ") << p;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace q2mpc
