#ifndef BTC_VERSION_HPP
#define BTC_VERSION_HPP

namespace btc {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
