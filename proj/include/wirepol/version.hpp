#pragma once

namespace wirepol {

inline constexpr const char* version = "1.0.0";

} // namespace wirepol
