// SPDX-License-Identifier: Apache-2.0
//
// Source positions and diagnostics shared by every stage of the analysis.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace solfp {

/// A half-open byte range in a source file, with 1-based line and column
/// coordinates for both ends. `col_end` points one past the last byte.
struct SourceSpan {
  std::uint32_t byte_offset = 0;
  std::uint32_t byte_length = 0;
  std::uint32_t line_start = 1;
  std::uint32_t col_start = 1;
  std::uint32_t line_end = 1;
  std::uint32_t col_end = 1;

  std::uint32_t byte_end() const { return byte_offset + byte_length; }

  bool contains_line(std::uint32_t line) const {
    return line >= line_start && line <= line_end;
  }

  bool operator==(const SourceSpan&) const = default;
};

/// Smallest span covering both arguments.
SourceSpan merge(const SourceSpan& first, const SourceSpan& last);

/// True when the span is internally ordered and lies inside a buffer of
/// `text_size` bytes.
bool span_is_valid(const SourceSpan& span, std::size_t text_size);

/// Maps byte offsets to line/column pairs.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text);

  SourceSpan span(std::uint32_t begin, std::uint32_t end) const;
  std::uint32_t line_of(std::uint32_t offset) const;
  std::uint32_t column_of(std::uint32_t offset) const;
  std::size_t line_count() const { return line_starts_.size(); }

 private:
  std::vector<std::uint32_t> line_starts_;
  std::uint32_t size_ = 0;
};

enum class Severity { Note, Warning, Error };

const char* to_string(Severity severity);

struct Diagnostic {
  SourceSpan span;
  Severity severity = Severity::Error;
  std::string message;
};

/// Returns the full text of 1-based line `line`, without the newline.
std::string_view line_text(std::string_view text, std::uint32_t line);

}  // namespace solfp
