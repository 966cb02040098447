#ifndef FRACTEN_VERSION_HPP
#define FRACTEN_VERSION_HPP

namespace fracten {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fracten

#endif  // FRACTEN_VERSION_HPP
