#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jetham::cli {

/// A rendered value: plain text plus its LaTeX form.
struct Rendered {
  std::string text;
  std::string tex;

  friend bool operator==(const Rendered&, const Rendered&) = default;
};

struct EquationRow {
  std::string label;
  Rendered lhs;
  Rendered rhs;

  friend bool operator==(const EquationRow&, const EquationRow&) = default;
};

/// `name = value` rows: Hamiltonians, connection components, forms.
struct EntryRow {
  Rendered name;
  Rendered value;

  friend bool operator==(const EntryRow&, const EntryRow&) = default;
};

struct CheckResult {
  bool holds = false;
  std::string witness;  ///< empty when the property holds

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct TaskResult {
  std::string name;  ///< the task as written, e.g. "restrict h sigma"
  std::string kind;  ///< "equations", "entries" or "check"
  std::vector<EquationRow> equations;
  std::vector<EntryRow> entries;
  std::optional<CheckResult> check;

  friend bool operator==(const TaskResult&, const TaskResult&) = default;
};

struct OutputDocument {
  static constexpr int kVersion = 1;

  int version = kVersion;
  std::vector<TaskResult> tasks;

  /// True unless some check result failed.
  bool all_checks_hold() const;

  friend bool operator==(const OutputDocument&, const OutputDocument&) = default;
};

enum class Format { text, latex, json };

std::optional<Format> parse_format(std::string_view s);

std::string emit(const OutputDocument& doc, Format format);

/// Inverse of emit(doc, Format::json). Throws jetham::ParseError on
/// malformed or wrong-version input.
OutputDocument document_from_json(std::string_view json);

}  // namespace jetham::cli
