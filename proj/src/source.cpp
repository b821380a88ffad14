// SPDX-License-Identifier: Apache-2.0

#include "solfp/source.hpp"

#include <algorithm>

namespace solfp {

SourceSpan merge(const SourceSpan& first, const SourceSpan& last) {
  const SourceSpan& lo = first.byte_offset <= last.byte_offset ? first : last;
  const SourceSpan& hi = first.byte_end() >= last.byte_end() ? first : last;
  SourceSpan out;
  out.byte_offset = lo.byte_offset;
  out.byte_length = hi.byte_end() - lo.byte_offset;
  out.line_start = lo.line_start;
  out.col_start = lo.col_start;
  out.line_end = hi.line_end;
  out.col_end = hi.col_end;
  return out;
}

bool span_is_valid(const SourceSpan& span, std::size_t text_size) {
  if (span.line_start < 1 || span.col_start < 1) return false;
  if (span.line_start > span.line_end) return false;
  if (span.line_start == span.line_end && span.col_start > span.col_end) return false;
  return static_cast<std::size_t>(span.byte_end()) <= text_size;
}

LineIndex::LineIndex(std::string_view text) : size_(static_cast<std::uint32_t>(text.size())) {
  line_starts_.push_back(0);
  for (std::uint32_t i = 0; i < size_; ++i) {
    if (text[i] == '\n') line_starts_.push_back(i + 1);
  }
}

std::uint32_t LineIndex::line_of(std::uint32_t offset) const {
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  return static_cast<std::uint32_t>(it - line_starts_.begin());
}

std::uint32_t LineIndex::column_of(std::uint32_t offset) const {
  std::uint32_t line = line_of(offset);
  return offset - line_starts_[line - 1] + 1;
}

SourceSpan LineIndex::span(std::uint32_t begin, std::uint32_t end) const {
  begin = std::min(begin, size_);
  end = std::clamp(end, begin, size_);
  SourceSpan s;
  s.byte_offset = begin;
  s.byte_length = end - begin;
  s.line_start = line_of(begin);
  s.col_start = column_of(begin);
  s.line_end = line_of(end);
  s.col_end = column_of(end);
  return s;
}

const char* to_string(Severity severity) {
  switch (severity) {
    case Severity::Note: return "note";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "error";
}

std::string_view line_text(std::string_view text, std::uint32_t line) {
  std::size_t pos = 0;
  for (std::uint32_t l = 1; l < line; ++l) {
    pos = text.find('\n', pos);
    if (pos == std::string_view::npos) return {};
    ++pos;
  }
  std::size_t end = text.find('\n', pos);
  std::string_view out = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
  if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
  return out;
}

}  // namespace solfp
