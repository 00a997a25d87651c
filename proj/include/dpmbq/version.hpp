#pragma once

namespace dpmbq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dpmbq
