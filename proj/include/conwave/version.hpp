#pragma once

namespace conwave {

inline constexpr const char* kVersion = "conwave-0.1.0";

} // namespace conwave
