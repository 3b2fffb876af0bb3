#ifndef TAILCALC_VERSION_HPP
#define TAILCALC_VERSION_HPP

namespace tailcalc {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // TAILCALC_VERSION_HPP
