#pragma once

namespace accent {
inline constexpr const char* kVersion = "1.0.0";
}
