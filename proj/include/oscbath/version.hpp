#pragma once

namespace oscbath {
inline constexpr const char* kVersion = "0.1.0";
}
