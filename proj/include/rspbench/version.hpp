#pragma once

namespace rspbench {
inline constexpr const char* version = "0.1.0";
}
