#ifndef HEATLAB_VERSION_HPP
#define HEATLAB_VERSION_HPP

namespace heatlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace heatlab

#endif
