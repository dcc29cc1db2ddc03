#pragma once

namespace ccopt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ccopt
