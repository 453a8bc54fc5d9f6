#include "jetham/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>
#include <utility>

#include "jetham/error.hpp"
#include "jetham/parse.hpp"

namespace jetham::cli {

namespace {

constexpr std::array<std::pair<TaskKind, std::string_view>, 11> kTaskNames{{
    {TaskKind::prolong, "prolong"},
    {TaskKind::hamilton, "hamilton"},
    {TaskKind::euler_lagrange, "euler-lagrange"},
    {TaskKind::check_closed, "check-closed"},
    {TaskKind::restrict, "restrict"},
    {TaskKind::legendre, "legendre"},
    {TaskKind::eliminate_momenta, "eliminate-momenta"},
    {TaskKind::contact_forms, "contact-forms"},
    {TaskKind::composite_connection, "composite-connection"},
    {TaskKind::pullback_connection, "pullback-connection"},
    {TaskKind::vertical_differential, "vertical-differential"},
}};

std::string task_list() {
  std::string out;
  for (const auto& [k, name] : kTaskNames) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

struct Word {
  std::string text;
  SourcePos pos;
};

struct Statement {
  Word key;    // whole line for task statements
  Word value;  // empty for task statements
  std::vector<Word> words;
};

struct Block {
  std::vector<Word> header;
  SourcePos pos;
  std::vector<Statement> body;
};

ParseError error(ParseErrorKind kind, SourcePos at, std::string message, std::string hint = {}) {
  return ParseError(kind, at.line, at.column, std::move(message), std::move(hint));
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_space(char c) { return c == ' ' || c == '\t'; }

// Trimmed [begin, end) of `line`, as a word with its 1-based column.
Word slice(std::string_view line, std::size_t lineno, std::size_t begin, std::size_t end) {
  while (begin < end && is_space(line[begin])) ++begin;
  while (end > begin && is_space(line[end - 1])) --end;
  return Word{std::string(line.substr(begin, end - begin)), SourcePos{lineno, begin + 1}};
}

std::vector<Word> split_words(const Word& w) {
  std::vector<Word> out;
  std::size_t k = 0;
  while (k < w.text.size()) {
    while (k < w.text.size() && is_space(w.text[k])) ++k;
    std::size_t start = k;
    while (k < w.text.size() && !is_space(w.text[k])) ++k;
    if (k > start) out.push_back({w.text.substr(start, k - start), {w.pos.line, w.pos.column + start}});
  }
  return out;
}

std::vector<Word> split_list(const Word& w) {
  std::vector<Word> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= w.text.size(); ++k) {
    if (k == w.text.size() || w.text[k] == ',') {
      Word item = slice(w.text, w.pos.line, start, k);
      item.pos.column += w.pos.column - 1;
      if (item.text.empty()) throw error(ParseErrorKind::syntax, item.pos, "empty list item", "separate names with commas");
      out.push_back(item);
      start = k + 1;
    }
  }
  return out;
}

Statement make_statement(const Word& w, bool tasks) {
  Statement s;
  if (tasks) {
    s.key = w;
    s.words = split_words(w);
    return s;
  }
  auto eq = w.text.find('=');
  if (eq == std::string::npos) throw error(ParseErrorKind::syntax, w.pos, "expected 'key = value'", "assignments use '='");
  s.key = slice(w.text, w.pos.line, 0, eq);
  s.value = slice(w.text, w.pos.line, eq + 1, w.text.size());
  s.key.pos.column += w.pos.column - 1;
  s.value.pos.column += w.pos.column - 1;
  if (s.key.text.empty()) throw error(ParseErrorKind::syntax, w.pos, "missing key before '='");
  if (s.value.text.empty()) throw error(ParseErrorKind::syntax, s.value.pos, "missing value after '='");
  return s;
}

// Pass 1: blocks and statements, no interpretation of values.
std::vector<Block> split_blocks(std::string_view text) {
  std::vector<Block> blocks;
  bool open = false;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    for (std::size_t k = 0; k < line.size(); ++k) {
      auto c = static_cast<unsigned char>(line[k]);
      if ((c < 0x20 && c != '\t') || c == 0x7f) {
        throw error(ParseErrorKind::lexical, {lineno, k + 1}, "control character in input", "remove it");
      }
    }
    std::size_t lo = 0;
    std::size_t hi = line.size();
    while (lo < hi) {
      Word rest = slice(line, lineno, lo, hi);
      if (rest.text.empty()) break;
      const std::size_t at = rest.pos.column - 1;
      if (!open) {
        auto brace = line.find('{', at);
        if (brace == std::string_view::npos || brace >= hi) {
          throw error(ParseErrorKind::syntax, rest.pos, "expected a block header ending in '{'",
                      "blocks are bundle, hamiltonian, lagrangian, section NAME, connection NAME : FIBRATION, tasks");
        }
        Block b;
        b.pos = rest.pos;
        Word header = slice(line, lineno, at, brace);
        std::string spaced;
        std::vector<std::size_t> column_of;
        for (std::size_t k = 0; k < header.text.size(); ++k) {
          if (header.text[k] == ':') {
            spaced += " : ";
            column_of.insert(column_of.end(), 3, header.pos.column + k);
          } else {
            spaced += header.text[k];
            column_of.push_back(header.pos.column + k);
          }
        }
        for (auto& w : split_words(Word{spaced, {lineno, 1}})) {
          w.pos.column = column_of[w.pos.column - 1];
          b.header.push_back(w);
        }
        if (b.header.empty()) throw error(ParseErrorKind::syntax, b.pos, "missing block name before '{'");
        blocks.push_back(std::move(b));
        open = true;
        lo = brace + 1;
        continue;
      }
      auto close = line.find('}', at);
      const std::size_t stop = close == std::string_view::npos || close >= hi ? hi : close;
      Word stmt = slice(line, lineno, at, stop);
      if (!stmt.text.empty()) {
        if (stmt.text.find('{') != std::string::npos) {
          throw error(ParseErrorKind::syntax, stmt.pos, "blocks do not nest", "close the previous block with '}'");
        }
        blocks.back().body.push_back(make_statement(stmt, blocks.back().header[0].text == "tasks"));
      }
      if (stop == hi) break;
      open = false;
      lo = stop + 1;
    }
    start = end + 1;
  }
  if (open) {
    throw error(ParseErrorKind::syntax, blocks.back().pos, "block '" + blocks.back().header[0].text + "' is never closed",
                "add a closing '}'");
  }
  return blocks;
}

int parse_int(const Word& w, int lo) {
  int v = 0;
  const char* b = w.text.data();
  const char* e = b + w.text.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || v < lo) {
    throw error(ParseErrorKind::semantic, w.pos, "expected an integer >= " + std::to_string(lo), "write a plain integer");
  }
  return v;
}

std::vector<std::string> identifier_list(const Word& w) {
  std::vector<std::string> out;
  for (const auto& item : split_list(w)) {
    if (!is_identifier(item.text)) {
      throw error(ParseErrorKind::lexical, item.pos, "'" + item.text + "' is not a valid identifier",
                  "use letters and digits, starting with a letter");
    }
    out.push_back(item.text);
  }
  return out;
}

std::vector<sym::FunctionSignature> function_list(const Word& w) {
  std::vector<sym::FunctionSignature> out;
  for (const auto& item : split_list(w)) {
    auto slash = item.text.find('/');
    std::string name = item.text.substr(0, slash);
    if (slash == std::string::npos || !is_identifier(name)) {
      throw error(ParseErrorKind::syntax, item.pos, "expected NAME/ARITY", "e.g. functions = F/2");
    }
    Word arity{item.text.substr(slash + 1), {item.pos.line, item.pos.column + slash + 1}};
    out.push_back({name, static_cast<std::size_t>(parse_int(arity, 1))});
  }
  return out;
}

void check_keys(const Block& b, std::initializer_list<std::string_view> allowed) {
  std::set<std::string> seen;
  for (const auto& s : b.body) {
    if (std::find(allowed.begin(), allowed.end(), s.key.text) == allowed.end()) {
      std::string list;
      for (auto k : allowed) list += (list.empty() ? "" : ", ") + std::string(k);
      throw error(ParseErrorKind::semantic, s.key.pos, "unknown key '" + s.key.text + "' in block '" + b.header[0].text + "'",
                  "allowed keys: " + list);
    }
    if (!seen.insert(s.key.text).second) {
      throw error(ParseErrorKind::semantic, s.key.pos, "key '" + s.key.text + "' is set twice", "keep one assignment");
    }
  }
}

ExprNode parse_expression(const geom::Chart& chart, const Word& w) {
  try {
    return ExprNode{w.text, w.pos, sym::parse_expr(w.text, chart.resolver())};
  } catch (const ParseError& e) {
    throw e.relocated(w.pos.line, w.pos.column - 1);
  }
}

Coord resolve_coordinate(const geom::Chart& chart, const Word& w) {
  auto r = chart.resolve(w.text);
  if (const auto* c = std::get_if<Coord>(&r)) return *c;
  if (const auto* u = std::get_if<sym::Unresolved>(&r)) {
    throw error(ParseErrorKind::unknown_coordinate, w.pos, "unknown coordinate '" + w.text + "'", u->hint);
  }
  throw error(ParseErrorKind::unknown_coordinate, w.pos, "'" + w.text + "' is a function, not a coordinate");
}

void expect_header(const Block& b, std::size_t size, std::string_view usage) {
  if (b.header.size() != size) {
    throw error(ParseErrorKind::syntax, b.pos, "malformed block header", "write '" + std::string(usage) + " {'");
  }
}

struct Pending {
  const Block* bundle = nullptr;
  const Block* hamiltonian = nullptr;
  const Block* lagrangian = nullptr;
  std::vector<const Block*> sections;
  std::vector<const Block*> connections;
  const Block* tasks = nullptr;
};

void set_once(const Block*& slot, const Block& b) {
  if (slot) throw error(ParseErrorKind::semantic, b.pos, "block '" + b.header[0].text + "' appears twice", "merge the two blocks");
  slot = &b;
}

const Statement* find(const Block* b, std::string_view key) {
  if (!b) return nullptr;
  for (const auto& s : b->body) {
    if (s.key.text == key) return &s;
  }
  return nullptr;
}

geom::ChartSpec bundle_spec(const Pending& p) {
  geom::ChartSpec spec;
  spec.order = 2;
  spec.composite = true;
  spec.momenta = true;
  if (const Block* b = p.bundle) {
    check_keys(*b, {"n", "m", "order", "base", "fibers", "theta", "momentum", "parameters"});
    if (auto* s = find(b, "n")) spec.n = parse_int(s->value, 1);
    if (auto* s = find(b, "m")) spec.m = parse_int(s->value, 1);
    if (auto* s = find(b, "order")) spec.order = parse_int(s->value, 1);
    if (auto* s = find(b, "base")) spec.base_names = identifier_list(s->value);
    if (auto* s = find(b, "fibers")) spec.fiber_names = identifier_list(s->value);
    if (auto* s = find(b, "theta")) spec.theta_name = identifier_list(s->value).at(0);
    if (auto* s = find(b, "momentum")) spec.momentum_stem = identifier_list(s->value).at(0);
    if (auto* s = find(b, "parameters")) spec.parameters = identifier_list(s->value);
  }
  for (const Block* b : {p.hamiltonian, p.lagrangian}) {
    if (auto* s = find(b, "parameters")) {
      auto more = identifier_list(s->value);
      spec.parameters.insert(spec.parameters.end(), more.begin(), more.end());
    }
    if (auto* s = find(b, "functions")) {
      auto more = function_list(s->value);
      spec.functions.insert(spec.functions.end(), more.begin(), more.end());
    }
  }
  return spec;
}

SourcePos chart_error_pos(const Pending& p) {
  if (p.bundle) return p.bundle->pos;
  if (p.hamiltonian) return p.hamiltonian->pos;
  return {1, 1};
}

SectionDecl section_decl(const geom::Chart& chart, const Block& b) {
  expect_header(b, 2, "section NAME");
  SectionDecl d;
  d.name = b.header[1].text;
  d.pos = b.pos;
  if (b.body.empty()) throw error(ParseErrorKind::semantic, b.pos, "section '" + d.name + "' assigns nothing", "e.g. tau = x");
  bool theta = false;
  bool fibers = false;
  for (const auto& s : b.body) {
    Coord c = resolve_coordinate(chart, s.key);
    if (c == chart.theta()) {
      theta = true;
    } else if (c.role == sym::Role::y_fiber) {
      fibers = true;
    } else {
      throw error(ParseErrorKind::semantic, s.key.pos, "a section assigns the line-bundle coordinate or the fibers",
                  "use '" + chart.theta().name + " = ...' or '<fiber> = ...'");
    }
    if (!d.assignments.emplace(c, parse_expression(chart, s.value)).second) {
      throw error(ParseErrorKind::semantic, s.key.pos, "'" + s.key.text + "' is assigned twice");
    }
  }
  if (theta && fibers) {
    throw error(ParseErrorKind::semantic, b.pos, "section '" + d.name + "' mixes the line-bundle coordinate and fibers",
                "split it into a section of Theta->X and one of Y->Theta");
  }
  d.of = theta ? geom::Fibration::ThetaX : geom::Fibration::YTheta;
  try {
    d.spec(chart);
  } catch (const DomainError& e) {
    throw error(ParseErrorKind::semantic, b.pos, e.what(), "sections of Theta->X depend on the base only");
  }
  return d;
}

ConnectionDecl connection_decl(const geom::Chart& chart, const Block& b) {
  expect_header(b, 4, "connection NAME : FIBRATION");
  if (b.header[2].text != ":") expect_header(b, 0, "connection NAME : FIBRATION");
  ConnectionDecl d;
  d.name = b.header[1].text;
  d.pos = b.pos;
  auto on = geom::parse_fibration(b.header[3].text);
  if (!on) {
    throw error(ParseErrorKind::semantic, b.header[3].pos, "unknown fibration '" + b.header[3].text + "'",
                "one of Y->Theta, Theta->X, Y->X, Pi->X");
  }
  d.on = *on;
  for (const auto& s : b.body) {
    auto colon = s.key.text.find(':');
    if (colon == std::string::npos) {
      throw error(ParseErrorKind::syntax, s.key.pos, "expected FIBER:BASE before '='", "e.g. y:x = tau*y");
    }
    Word fiber = slice(s.key.text, s.key.pos.line, 0, colon);
    Word base = slice(s.key.text, s.key.pos.line, colon + 1, s.key.text.size());
    fiber.pos.column += s.key.pos.column - 1;
    base.pos.column += s.key.pos.column - 1;
    geom::ComponentKey key{resolve_coordinate(chart, fiber), resolve_coordinate(chart, base)};
    if (!d.components.emplace(key, parse_expression(chart, s.value)).second) {
      throw error(ParseErrorKind::semantic, s.key.pos, "component '" + s.key.text + "' is set twice");
    }
  }
  try {
    d.make(chart);
  } catch (const DomainError& e) {
    throw error(ParseErrorKind::semantic, b.pos, e.what(),
                "components are indexed FIBER:BASE of the fibration and depend on its total space only");
  }
  return d;
}

void check_task(const ModelFile& m, const Task& t, const std::vector<Word>& args) {
  auto arity = [&](std::size_t lo, std::size_t hi, std::string_view usage) {
    if (args.size() < lo || args.size() > hi) {
      throw error(ParseErrorKind::arity_mismatch, t.pos, "wrong number of arguments for '" + std::string(task_name(t.kind)) + "'",
                  "usage: " + std::string(usage));
    }
  };
  auto need = [&](bool ok, std::string what) {
    if (!ok) throw error(ParseErrorKind::semantic, t.pos, "task '" + t.label() + "' needs " + what, "add the " + what);
  };
  auto section = [&](const Word& w, geom::Fibration of) {
    auto it = m.sections.find(w.text);
    if (it == m.sections.end() || it->second.of != of) {
      throw error(ParseErrorKind::semantic, w.pos, "'" + w.text + "' is not a declared section of " + std::string(geom::fibration_name(of)),
                  "declare 'section " + w.text + " { ... }'");
    }
  };
  auto connection = [&](const Word& w, geom::Fibration on) {
    auto it = m.connections.find(w.text);
    if (it == m.connections.end() || it->second.on != on) {
      throw error(ParseErrorKind::semantic, w.pos, "'" + w.text + "' is not a declared connection on " + std::string(geom::fibration_name(on)),
                  "declare 'connection " + w.text + " : " + std::string(geom::fibration_name(on)) + " { ... }'");
    }
  };
  switch (t.kind) {
    case TaskKind::prolong: {
      arity(1, 1, "prolong R");
      int r = parse_int(args[0], 0);
      if (r < m.chart.order()) {
        throw error(ParseErrorKind::semantic, args[0].pos, "cannot prolong below the working order " + std::to_string(m.chart.order()),
                    "use R >= the bundle order");
      }
      break;
    }
    case TaskKind::hamilton:
    case TaskKind::eliminate_momenta:
      arity(0, 0, std::string(task_name(t.kind)));
      need(m.hamiltonian.has_value(), "a hamiltonian block");
      break;
    case TaskKind::check_closed:
      arity(0, 1, "check-closed [CONNECTION]");
      if (args.empty()) need(m.hamiltonian.has_value(), "a hamiltonian block");
      else connection(args[0], geom::Fibration::PiX);
      break;
    case TaskKind::euler_lagrange:
      arity(0, 0, "euler-lagrange");
      need(m.lagrangian || m.hamiltonian, "a lagrangian or hamiltonian block");
      break;
    case TaskKind::restrict:
      arity(1, 2, "restrict H_SECTION [SIGMA_SECTION]");
      need(m.hamiltonian.has_value(), "a hamiltonian block");
      section(args[0], geom::Fibration::ThetaX);
      if (args.size() == 2) section(args[1], geom::Fibration::YTheta);
      break;
    case TaskKind::legendre:
      arity(0, 0, "legendre");
      need(m.lagrangian.has_value(), "a lagrangian block");
      break;
    case TaskKind::contact_forms:
      arity(0, 0, "contact-forms");
      break;
    case TaskKind::composite_connection:
      arity(2, 2, "composite-connection Y_THETA_CONNECTION THETA_X_CONNECTION");
      connection(args[0], geom::Fibration::YTheta);
      connection(args[1], geom::Fibration::ThetaX);
      break;
    case TaskKind::pullback_connection:
      arity(2, 2, "pullback-connection Y_THETA_CONNECTION H_SECTION");
      connection(args[0], geom::Fibration::YTheta);
      section(args[1], geom::Fibration::ThetaX);
      break;
    case TaskKind::vertical_differential:
      arity(1, 1, "vertical-differential Y_THETA_CONNECTION");
      connection(args[0], geom::Fibration::YTheta);
      break;
  }
}

}  // namespace

std::string_view task_name(TaskKind k) {
  for (const auto& [kind, name] : kTaskNames) {
    if (kind == k) return name;
  }
  return "?";
}

std::optional<TaskKind> parse_task_kind(std::string_view s) {
  for (const auto& [kind, name] : kTaskNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::string Task::label() const {
  std::string out(task_name(kind));
  for (const auto& a : args) out += " " + a;
  return out;
}

geom::SectionSpec SectionDecl::spec(const geom::Chart& chart) const {
  std::map<Coord, Expr> values;
  for (const auto& [c, node] : assignments) values[c] = node.value;
  return geom::SectionSpec::make(chart, of, std::move(values));
}

geom::Connection ConnectionDecl::make(const geom::Chart& chart) const {
  std::map<geom::ComponentKey, Expr> values;
  for (const auto& [k, node] : components) values[k] = node.value;
  return geom::Connection::make(chart, on, values);
}

ham::HamiltonianSpec ModelFile::hamiltonian_spec() const {
  if (!hamiltonian) throw DomainError("the model has no hamiltonian block");
  return ham::HamiltonianSpec(legendre(), hamiltonian->value);
}

ModelFile parse_model(std::string_view text) {
  const std::vector<Block> blocks = split_blocks(text);
  Pending p;
  for (const auto& b : blocks) {
    const std::string& kind = b.header[0].text;
    if (kind == "bundle") {
      expect_header(b, 1, "bundle");
      set_once(p.bundle, b);
    } else if (kind == "hamiltonian") {
      expect_header(b, 1, "hamiltonian");
      set_once(p.hamiltonian, b);
      check_keys(b, {"parameters", "functions", "H"});
    } else if (kind == "lagrangian") {
      expect_header(b, 1, "lagrangian");
      set_once(p.lagrangian, b);
      check_keys(b, {"parameters", "functions", "L"});
    } else if (kind == "section") {
      p.sections.push_back(&b);
    } else if (kind == "connection") {
      p.connections.push_back(&b);
    } else if (kind == "tasks") {
      expect_header(b, 1, "tasks");
      set_once(p.tasks, b);
    } else {
      throw error(ParseErrorKind::semantic, b.header[0].pos, "unknown block '" + kind + "'",
                  "blocks are bundle, hamiltonian, lagrangian, section, connection, tasks");
    }
  }

  ModelFile m;
  m.bundle = bundle_spec(p);
  try {
    m.chart = geom::Chart(m.bundle);
  } catch (const DomainError& e) {
    throw error(ParseErrorKind::semantic, chart_error_pos(p), e.what(), "fix the bundle declaration");
  }

  if (auto* s = find(p.hamiltonian, "H")) {
    m.hamiltonian = parse_expression(m.chart, s->value);
    for (const auto& c : m.hamiltonian->value.coordinates()) {
      if (geom::Chart::jet_order(c) > 0) {
        throw error(ParseErrorKind::semantic, s->value.pos, "the Hamiltonian depends on the jet coordinate '" + c.name + "'",
                    "a Hamiltonian is a function of x, " + m.chart.theta().name + ", y and the momenta");
      }
    }
  } else if (p.hamiltonian) {
    throw error(ParseErrorKind::semantic, p.hamiltonian->pos, "hamiltonian block without 'H = ...'", "add H = <expression>");
  }
  if (auto* s = find(p.lagrangian, "L")) {
    m.lagrangian = parse_expression(m.chart, s->value);
  } else if (p.lagrangian) {
    throw error(ParseErrorKind::semantic, p.lagrangian->pos, "lagrangian block without 'L = ...'", "add L = <expression>");
  }

  std::set<std::string> names;
  auto claim = [&](const Block& b) {
    if (b.header.size() >= 2 && !is_identifier(b.header[1].text)) {
      throw error(ParseErrorKind::lexical, b.header[1].pos, "'" + b.header[1].text + "' is not a valid identifier",
                  "use letters and digits, starting with a letter");
    }
    if (b.header.size() >= 2 && !names.insert(b.header[1].text).second) {
      throw error(ParseErrorKind::semantic, b.header[1].pos, "name '" + b.header[1].text + "' is declared twice",
                  "give every section and connection its own name");
    }
  };
  for (const Block* b : p.sections) {
    claim(*b);
    SectionDecl d = section_decl(m.chart, *b);
    m.sections.emplace(d.name, std::move(d));
  }
  for (const Block* b : p.connections) {
    claim(*b);
    ConnectionDecl d = connection_decl(m.chart, *b);
    m.connections.emplace(d.name, std::move(d));
  }

  if (p.tasks) {
    for (const auto& s : p.tasks->body) {
      const Word& head = s.words.at(0);
      auto kind = parse_task_kind(head.text);
      if (!kind) throw error(ParseErrorKind::semantic, head.pos, "unknown task '" + head.text + "'", "tasks are " + task_list());
      Task t;
      t.kind = *kind;
      t.pos = head.pos;
      std::vector<Word> args(s.words.begin() + 1, s.words.end());
      for (const auto& a : args) t.args.push_back(a.text);
      check_task(m, t, args);
      m.tasks.push_back(std::move(t));
    }
  }
  return m;
}

}  // namespace jetham::cli
