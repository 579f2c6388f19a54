#pragma once

namespace smfdfa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace smfdfa
