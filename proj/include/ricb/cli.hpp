#pragma once

namespace ricb::cli {

// Exit codes: 0 success, 1 usage error, 2 runtime error.
int run(int argc, const char* const* argv);

}  // namespace ricb::cli
