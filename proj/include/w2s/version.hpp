#pragma once

namespace w2s {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace w2s
