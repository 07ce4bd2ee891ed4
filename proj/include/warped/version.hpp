#pragma once

namespace warped {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace warped
