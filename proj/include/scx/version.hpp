#pragma once

namespace scx {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace scx
