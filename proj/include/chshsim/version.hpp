#pragma once

namespace chshsim {
inline constexpr const char* kVersion = "0.1.0";
}
