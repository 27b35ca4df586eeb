#pragma once

namespace zerofid {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace zerofid
