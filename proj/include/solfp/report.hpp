// SPDX-License-Identifier: Apache-2.0
//
// Text and JSON renderings of analysis results. The JSON carries no timing
// so identical inputs give byte-identical output.

#pragma once

#include <string>
#include <vector>

#include "solfp/analysis.hpp"

namespace solfp {

struct RenderOptions {
  /// Text only: list every pattern check with its evidence.
  bool verbose = false;
};

std::string render_text(const std::vector<FileReport>& reports, const RenderOptions& opts = {});
std::string render_json(const std::vector<FileReport>& reports);

/// One line: "file:line:col VULN Outcome [P1,P2] contract.function".
std::string verdict_headline(const Verdict& v);

}  // namespace solfp
