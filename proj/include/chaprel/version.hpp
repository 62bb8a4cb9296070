#ifndef CHAPREL_VERSION_HPP
#define CHAPREL_VERSION_HPP

namespace chaprel {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
