#include "fsc/fsc_format.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "fsc/error.hpp"

namespace fsc::format {

bool operator==(const FscDocument& a, const FscDocument& b) {
  return a.p == b.p && a.e == b.e && a.m == b.m && a.params == b.params && a.subspaces == b.subspaces &&
         a.maps == b.maps && a.collections == b.collections && a.states == b.states && a.witnesses == b.witnesses;
}

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  FscDocument run() {
    std::istringstream in(text_);
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto tokens = tokenize(line);
      if (tokens.empty()) continue;
      handle(tokens);
    }
    if (block_) fail(line_no_ + 1, 1, "missing 'end' for " + block_kind_ + " '" + block_name_ + "'");
    if (!seen_header_) fail(1, 1, "missing 'FSC 1' header");
    std::sort(doc_.states.begin(), doc_.states.end());
    std::sort(doc_.witnesses.begin(), doc_.witnesses.end(), [](const Witness& a, const Witness& b) {
      return std::tie(a.collection, a.newcomer, a.parts) < std::tie(b.collection, b.newcomer, b.parts);
    });
    return std::move(doc_);
  }

 private:
  [[noreturn]] void fail(std::size_t line, std::size_t column, const std::string& msg) const {
    throw ParseError(line, column, msg);
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const { fail(line_no_, t.column, msg); }

  long long integer(const Token& t) const {
    if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        t.text.size() > 9) {
      fail(t, "expected a non-negative integer, got '" + t.text + "'");
    }
    return std::stoll(t.text);
  }

  void expect_count(const std::vector<Token>& tokens, std::size_t n) const {
    if (tokens.size() != n) {
      const std::size_t col = tokens.size() > n ? tokens[n].column : tokens.back().column;
      fail(line_no_, col, "'" + tokens[0].text + "' expects " + std::to_string(n - 1) + " arguments");
    }
  }

  void need_space() const {
    if (!field_) fail(line_no_, 1, "'field' must come first");
    if (doc_.m == 0) fail(line_no_, 1, "'ambient' must come first");
  }

  void define_name(const Token& t) {
    if (!valid_name(t.text)) fail(t, "invalid name '" + t.text + "'");
    if (names_.count(t.text)) fail(t, "name '" + t.text + "' is already defined");
    names_.insert(t.text);
  }

  const std::string& subspace_ref(const Token& t) const {
    if (!doc_.subspaces.count(t.text)) fail(t, "undefined subspace '" + t.text + "'");
    return t.text;
  }

  void check_member_dim(const Token& t) const {
    if (doc_.params && doc_.subspaces.at(t.text).dim() != doc_.params->alpha) {
      fail(t, "dimension mismatch: subspace '" + t.text + "' has dimension " +
                  std::to_string(doc_.subspaces.at(t.text).dim()) + ", params say alpha = " +
                  std::to_string(doc_.params->alpha));
    }
  }

  void handle(const std::vector<Token>& tokens) {
    const std::string& kw = tokens[0].text;
    if (!seen_header_) {
      if (kw != "FSC") fail(tokens[0], "expected 'FSC 1' header");
      expect_count(tokens, 2);
      if (tokens[1].text != "1") fail(tokens[1], "unsupported version '" + tokens[1].text + "'");
      seen_header_ = true;
      return;
    }
    if (block_) {
      if (kw == "row") {
        row(tokens);
      } else if (kw == "end") {
        expect_count(tokens, 1);
        end_block(tokens[0]);
      } else {
        fail(tokens[0], "expected 'row' or 'end' inside " + block_kind_ + " '" + block_name_ + "'");
      }
      return;
    }
    if (kw == "field") {
      expect_count(tokens, 3);
      if (field_) fail(tokens[0], "duplicate 'field' line");
      const long long p = integer(tokens[1]);
      const long long e = integer(tokens[2]);
      long long q = 1;
      for (long long i = 0; i < e && q <= Field::kMaxOrder; ++i) q *= p;
      if (!is_prime(static_cast<int>(p)) || e < 1 || q > Field::kMaxOrder) {
        fail(tokens[1], "unknown field order " + tokens[1].text + "^" + tokens[2].text);
      }
      doc_.p = static_cast<int>(p);
      doc_.e = static_cast<int>(e);
      field_ = &Field::get(doc_.p, doc_.e);
    } else if (kw == "ambient") {
      expect_count(tokens, 2);
      if (doc_.m != 0) fail(tokens[0], "duplicate 'ambient' line");
      const long long m = integer(tokens[1]);
      if (m < 1 || m > 64) fail(tokens[1], "ambient dimension must be between 1 and 64");
      doc_.m = static_cast<std::size_t>(m);
    } else if (kw == "params") {
      expect_count(tokens, 6);
      need_space();
      if (doc_.params) fail(tokens[0], "duplicate 'params' line");
      CodeParams p;
      p.m = doc_.m;
      p.q = field_->q();
      p.n = static_cast<std::size_t>(integer(tokens[1]));
      p.k = static_cast<std::size_t>(integer(tokens[2]));
      p.r = static_cast<std::size_t>(integer(tokens[3]));
      p.alpha = static_cast<std::size_t>(integer(tokens[4]));
      p.beta = static_cast<std::size_t>(integer(tokens[5]));
      try {
        p.validate();
      } catch (const std::invalid_argument& e) {
        fail(tokens[1], std::string("invalid params: ") + e.what());
      }
      doc_.params = p;
    } else if (kw == "subspace" || kw == "map") {
      expect_count(tokens, 2);
      need_space();
      define_name(tokens[1]);
      block_ = true;
      block_kind_ = kw;
      block_name_ = tokens[1].text;
      block_rows_ = Matrix(0, doc_.m);
    } else if (kw == "collection") {
      need_space();
      if (tokens.size() < 3) fail(tokens[0], "'collection' needs a name and at least one member");
      define_name(tokens[1]);
      std::vector<std::string> members;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        members.push_back(subspace_ref(tokens[i]));
        check_member_dim(tokens[i]);
      }
      if (doc_.params && members.size() != doc_.params->n - 1) {
        fail(tokens[1], "collection must have n - 1 = " + std::to_string(doc_.params->n - 1) + " members");
      }
      std::sort(members.begin(), members.end());
      doc_.collections.emplace(tokens[1].text, std::move(members));
    } else if (kw == "state") {
      expect_count(tokens, 4);
      if (tokens[2].text != "->") fail(tokens[2], "expected '->'");
      if (!doc_.collections.count(tokens[1].text)) fail(tokens[1], "undefined collection '" + tokens[1].text + "'");
      subspace_ref(tokens[3]);
      check_member_dim(tokens[3]);
      doc_.states.emplace_back(tokens[1].text, tokens[3].text);
    } else if (kw == "witness") {
      if (tokens.size() < 5) fail(tokens[0], "'witness' needs COLLECTION -> SUBSPACE : MEMBER=REPAIR ...");
      if (tokens[2].text != "->") fail(tokens[2], "expected '->'");
      if (tokens[4].text != ":") fail(tokens[4], "expected ':'");
      if (!doc_.collections.count(tokens[1].text)) fail(tokens[1], "undefined collection '" + tokens[1].text + "'");
      subspace_ref(tokens[3]);
      Witness w{tokens[1].text, tokens[3].text, {}};
      const auto& members = doc_.collections.at(tokens[1].text);
      for (std::size_t i = 5; i < tokens.size(); ++i) {
        const auto eq = tokens[i].text.find('=');
        if (eq == std::string::npos) fail(tokens[i], "expected MEMBER=REPAIR");
        const std::string host = tokens[i].text.substr(0, eq);
        const std::string rep = tokens[i].text.substr(eq + 1);
        if (std::find(members.begin(), members.end(), host) == members.end()) {
          fail(tokens[i], "'" + host + "' is not a member of collection '" + tokens[1].text + "'");
        }
        if (!doc_.subspaces.count(rep)) fail(line_no_, tokens[i].column + eq + 1, "undefined subspace '" + rep + "'");
        if (!doc_.subspaces.at(rep).is_subspace_of(doc_.subspaces.at(host))) {
          fail(tokens[i], "repair space '" + rep + "' is not inside '" + host + "'");
        }
        w.parts.emplace_back(host, rep);
      }
      std::sort(w.parts.begin(), w.parts.end());
      doc_.witnesses.push_back(std::move(w));
    } else if (kw == "row" || kw == "end") {
      fail(tokens[0], "'" + kw + "' outside a subspace or map block");
    } else {
      fail(tokens[0], "unknown keyword '" + kw + "'");
    }
  }

  void row(const std::vector<Token>& tokens) {
    if (tokens.size() - 1 != doc_.m) {
      const std::size_t col = tokens.size() - 1 > doc_.m ? tokens[doc_.m + 1].column : tokens.back().column;
      fail(line_no_, col,
           "dimension mismatch: row has " + std::to_string(tokens.size() - 1) + " entries, ambient is " +
               std::to_string(doc_.m));
    }
    std::vector<Elem> values;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const long long v = integer(tokens[i]);
      if (v >= field_->q()) fail(tokens[i], "value " + tokens[i].text + " is not an element of " + field_->name());
      values.push_back(static_cast<Elem>(v));
    }
    block_rows_.append_row(values);
  }

  void end_block(const Token& end) {
    if (block_kind_ == "subspace") {
      doc_.subspaces.emplace(block_name_, Subspace::row_space(*field_, block_rows_));
    } else {
      if (block_rows_.rows() != doc_.m) {
        fail(end, "map '" + block_name_ + "' needs " + std::to_string(doc_.m) + " rows");
      }
      if (linalg::rank(*field_, block_rows_) != doc_.m) fail(end, "map '" + block_name_ + "' is not invertible");
      doc_.maps.emplace(block_name_, group::LinearMap(*field_, block_rows_));
    }
    block_ = false;
  }

  const std::string& text_;
  FscDocument doc_;
  std::size_t line_no_ = 0;
  bool seen_header_ = false;
  const Field* field_ = nullptr;
  std::set<std::string> names_;
  bool block_ = false;
  std::string block_kind_;
  std::string block_name_;
  Matrix block_rows_;
};

void emit_rows(std::ostringstream& out, const Matrix& rows) {
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    out << "row";
    for (Elem v : rows.row(i)) out << ' ' << v;
    out << '\n';
  }
}

std::string padded(char prefix, std::size_t i, std::size_t count) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::to_string(count).size();
  return prefix + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

FscDocument parse_fsc(const std::string& text) { return Parser(text).run(); }

std::string emit_fsc(const FscDocument& doc) {
  std::ostringstream out;
  out << "FSC 1\n";
  out << "field " << doc.p << ' ' << doc.e << '\n';
  out << "ambient " << doc.m << '\n';
  if (doc.params) {
    const auto& p = *doc.params;
    out << "params " << p.n << ' ' << p.k << ' ' << p.r << ' ' << p.alpha << ' ' << p.beta << '\n';
  }
  for (const auto& [name, s] : doc.subspaces) {
    out << "subspace " << name << '\n';
    emit_rows(out, s.basis());
    out << "end\n";
  }
  for (const auto& [name, l] : doc.maps) {
    out << "map " << name << '\n';
    emit_rows(out, l.matrix());
    out << "end\n";
  }
  for (const auto& [name, members] : doc.collections) {
    out << "collection " << name;
    for (const auto& s : members) out << ' ' << s;
    out << '\n';
  }
  for (const auto& [c, s] : doc.states) out << "state " << c << " -> " << s << '\n';
  for (const auto& w : doc.witnesses) {
    out << "witness " << w.collection << " -> " << w.newcomer << " :";
    for (const auto& [host, rep] : w.parts) out << ' ' << host << '=' << rep;
    out << '\n';
  }
  return out.str();
}

std::vector<Subspace> collection_spaces(const FscDocument& doc, const std::string& name) {
  const auto it = doc.collections.find(name);
  if (it == doc.collections.end()) throw std::invalid_argument("no collection named '" + name + "'");
  std::vector<Subspace> out;
  for (const auto& s : it->second) out.push_back(doc.subspaces.at(s));
  return out;
}

StateSet to_state_set(const FscDocument& doc) {
  if (!doc.params) throw std::invalid_argument("document has no params line");
  StateSet states(doc.field(), *doc.params);
  for (const auto& [name, members] : doc.collections) states.insert(RepairingCollection(collection_spaces(doc, name)));
  for (const auto& [c, s] : doc.states) {
    states.add_transition(RepairingCollection(collection_spaces(doc, c)).key(), doc.subspaces.at(s));
  }
  return states;
}

FscDocument from_state_set(const StateSet& states) {
  FscDocument doc;
  doc.p = states.field().p();
  doc.e = states.field().e();
  doc.m = states.params().m;
  doc.params = states.params();

  std::set<Subspace> all;
  for (const auto& c : states.collections()) all.insert(c.spaces().begin(), c.spaces().end());
  for (const auto& [key, newcomers] : states.transitions()) all.insert(newcomers.begin(), newcomers.end());
  std::map<std::string, std::string> name_of;
  std::size_t i = 0;
  for (const auto& s : all) {
    const std::string name = padded('S', ++i, all.size());
    name_of.emplace(s.key(), name);
    doc.subspaces.emplace(name, s);
  }
  std::map<std::string, std::string> collection_name;
  i = 0;
  for (const auto& c : states.collections()) {
    const std::string name = padded('C', ++i, states.size());
    collection_name.emplace(c.key(), name);
    std::vector<std::string> members;
    for (const auto& s : c.spaces()) members.push_back(name_of.at(s.key()));
    std::sort(members.begin(), members.end());
    doc.collections.emplace(name, std::move(members));
  }
  for (const auto& [key, newcomers] : states.transitions()) {
    const auto it = collection_name.find(key);
    if (it == collection_name.end()) continue;
    for (const auto& u : newcomers) doc.states.emplace_back(it->second, name_of.at(u.key()));
  }
  std::sort(doc.states.begin(), doc.states.end());
  doc.states.erase(std::unique(doc.states.begin(), doc.states.end()), doc.states.end());
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace fsc::format
