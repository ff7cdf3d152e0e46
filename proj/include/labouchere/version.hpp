#pragma once

namespace labouchere {

inline constexpr const char* kVersion = "0.1.0";

}
