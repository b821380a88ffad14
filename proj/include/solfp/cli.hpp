// SPDX-License-Identifier: Apache-2.0
//
// The `solfp` command line: analyze, triage, bench, wizard.
//
// Exit status: 0 when nothing suspicious remains, 1 when at least one
// LikelyTP verdict (or ConfirmedSuspicious finding) is reported, 2 on a
// usage or input error.

#pragma once

#include <iosfwd>

namespace solfp {

/// Runs the command line with explicit streams. `interactive` says whether
/// `in` is a terminal; the wizard needs either that or `--answers`.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err,
            bool interactive);

}  // namespace solfp
