#pragma once

namespace recruit {
inline constexpr const char* kVersion = "0.1.0";
}
