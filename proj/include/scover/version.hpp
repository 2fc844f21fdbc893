#pragma once

namespace scover {

inline constexpr const char* kVersion = "0.1.0";

} // namespace scover
