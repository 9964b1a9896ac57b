#ifndef BUBBLELAB_VERSION_HPP
#define BUBBLELAB_VERSION_HPP

namespace bubblelab {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
