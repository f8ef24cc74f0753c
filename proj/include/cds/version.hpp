#pragma once

namespace cds {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cds
