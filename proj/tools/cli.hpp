#pragma once

namespace bpl::cli {

/// Exit codes: 0 success, 1 config error, 2 verification failure.
int run(int argc, char** argv);

}  // namespace bpl::cli
