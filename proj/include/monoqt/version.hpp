#pragma once

namespace monoqt {

inline constexpr const char* kVersion = "1.0.0";

} // namespace monoqt
