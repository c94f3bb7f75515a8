#pragma once

namespace rcs {

// Exit codes: 0 success, 1 a verdict failed, 2 usage or config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

int dispatch(int argc, char** argv);

}  // namespace rcs
