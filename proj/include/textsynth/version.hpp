#pragma once

namespace textsynth {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace textsynth
