#pragma once

namespace kdv5 {
inline constexpr const char* kVersion = "0.1.0";
}
