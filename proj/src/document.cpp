#include "jetham/document.hpp"

#include <algorithm>
#include <json.hpp>

#include "jetham/error.hpp"

namespace jetham::cli {

namespace {

using Json = nlohmann::ordered_json;

// Display width in code points; every symbol we emit is single-width.
std::size_t width(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string pad(const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, width(s)), ' '); }

std::string emit_text(const OutputDocument& doc) {
  std::string out;
  for (const auto& t : doc.tasks) {
    if (!out.empty()) out += "\n";
    out += t.name + "  [" + t.kind + "]\n";
    std::size_t label_w = 0;
    std::size_t lhs_w = 0;
    for (const auto& e : t.equations) {
      label_w = std::max(label_w, width(e.label));
      lhs_w = std::max(lhs_w, width(e.lhs.text));
    }
    for (const auto& e : t.equations) {
      out += "  ";
      if (label_w) out += pad(e.label, label_w) + "  ";
      out += pad(e.lhs.text, lhs_w) + " = " + e.rhs.text + "\n";
    }
    std::size_t name_w = 0;
    for (const auto& e : t.entries) name_w = std::max(name_w, width(e.name.text));
    for (const auto& e : t.entries) out += "  " + pad(e.name.text, name_w) + " = " + e.value.text + "\n";
    if (t.check) {
      out += std::string("  holds: ") + (t.check->holds ? "true" : "false") + "\n";
      if (!t.check->witness.empty()) out += "  witness: " + t.check->witness + "\n";
    }
  }
  return out;
}

std::string emit_latex(const OutputDocument& doc) {
  std::string out;
  for (const auto& t : doc.tasks) {
    if (!out.empty()) out += "\n";
    out += "% " + t.name + "\n";
    std::vector<std::string> rows;
    for (const auto& e : t.equations) rows.push_back(e.lhs.tex + " = " + e.rhs.tex);
    for (const auto& e : t.entries) rows.push_back(e.name.tex + " = " + e.value.tex);
    if (t.check) rows.push_back(std::string("\\text{holds: ") + (t.check->holds ? "true" : "false") + "}");
    if (t.check && !t.check->witness.empty()) out += "% witness: " + t.check->witness + "\n";
    if (rows.empty()) {
      out += "% no rows\n";
      continue;
    }
    out += "\\begin{gather*}\n";
    for (std::size_t k = 0; k < rows.size(); ++k) out += rows[k] + (k + 1 < rows.size() ? " \\\\\n" : "\n");
    out += "\\end{gather*}\n";
  }
  return out;
}

Json rendered(const Rendered& r) { return Json{{"text", r.text}, {"tex", r.tex}}; }

std::string emit_json(const OutputDocument& doc) {
  Json tasks = Json::array();
  for (const auto& t : doc.tasks) {
    Json eqs = Json::array();
    for (const auto& e : t.equations) eqs.push_back(Json{{"label", e.label}, {"lhs", rendered(e.lhs)}, {"rhs", rendered(e.rhs)}});
    Json entries = Json::array();
    for (const auto& e : t.entries) entries.push_back(Json{{"name", rendered(e.name)}, {"value", rendered(e.value)}});
    Json check = t.check ? Json{{"holds", t.check->holds}, {"witness", t.check->witness}} : Json(nullptr);
    Json payload{{"equations", eqs}, {"entries", entries}, {"check", check}};
    tasks.push_back(Json{{"name", t.name}, {"kind", t.kind}, {"payload", payload}});
  }
  return Json{{"version", doc.version}, {"tasks", tasks}}.dump(2) + "\n";
}

Rendered read_rendered(const Json& j) { return {j.at("text").get<std::string>(), j.at("tex").get<std::string>()}; }

}  // namespace

bool OutputDocument::all_checks_hold() const {
  return std::all_of(tasks.begin(), tasks.end(), [](const TaskResult& t) { return !t.check || t.check->holds; });
}

std::optional<Format> parse_format(std::string_view s) {
  if (s == "text") return Format::text;
  if (s == "latex") return Format::latex;
  if (s == "json") return Format::json;
  return std::nullopt;
}

std::string emit(const OutputDocument& doc, Format format) {
  switch (format) {
    case Format::text: return emit_text(doc);
    case Format::latex: return emit_latex(doc);
    case Format::json: return emit_json(doc);
  }
  return {};
}

OutputDocument document_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(ParseErrorKind::syntax, 0, e.byte, "invalid JSON document");
  }
  try {
    OutputDocument doc;
    doc.version = j.at("version").get<int>();
    if (doc.version != OutputDocument::kVersion) {
      throw ParseError(ParseErrorKind::semantic, 0, 0, "unsupported document version " + std::to_string(doc.version));
    }
    for (const auto& t : j.at("tasks")) {
      TaskResult r;
      r.name = t.at("name").get<std::string>();
      r.kind = t.at("kind").get<std::string>();
      const Json& p = t.at("payload");
      for (const auto& e : p.at("equations")) {
        r.equations.push_back({e.at("label").get<std::string>(), read_rendered(e.at("lhs")), read_rendered(e.at("rhs"))});
      }
      for (const auto& e : p.at("entries")) r.entries.push_back({read_rendered(e.at("name")), read_rendered(e.at("value"))});
      if (!p.at("check").is_null()) {
        r.check = CheckResult{p.at("check").at("holds").get<bool>(), p.at("check").at("witness").get<std::string>()};
      }
      doc.tasks.push_back(std::move(r));
    }
    return doc;
  } catch (const Json::exception& e) {
    throw ParseError(ParseErrorKind::semantic, 0, 0, std::string("malformed document: ") + e.what());
  }
}

}  // namespace jetham::cli
