#pragma once

namespace shmod {
inline constexpr const char* version = "0.1.0";
}
