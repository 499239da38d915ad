#pragma once

namespace alpc {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace alpc
