#pragma once

namespace rtsim {
inline constexpr const char* kVersion = "0.1.0";
}
