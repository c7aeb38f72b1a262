#ifndef POINTNLS_VERSION_HPP
#define POINTNLS_VERSION_HPP

namespace pointnls {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pointnls

#endif
