#pragma once

namespace dkposc {

inline constexpr const char* kToolName = "dkposc";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace dkposc
