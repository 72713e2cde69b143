#include "hiersynth/crc64.hpp"

#include <array>

namespace hiersynth {

namespace {

std::array<std::uint64_t, 256> make_table() {
    std::array<std::uint64_t, 256> t{};
    const std::uint64_t poly = 0xC96C5795D7870F42ull;
    for (int i = 0; i < 256; ++i) {
        std::uint64_t c = static_cast<std::uint64_t>(i);
        for (int b = 0; b < 8; ++b) {
            c = (c & 1) ? (c >> 1) ^ poly : c >> 1;
        }
        t[static_cast<std::size_t>(i)] = c;
    }
    return t;
}

const std::array<std::uint64_t, 256>& table() {
    static const auto t = make_table();
    return t;
}

}  // namespace

void Crc64::update(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    const auto& t = table();
    for (std::size_t i = 0; i < len; ++i) {
        state_ = t[(state_ ^ p[i]) & 0xFF] ^ (state_ >> 8);
    }
}

std::uint64_t crc64(const void* data, std::size_t len) {
    Crc64 c;
    c.update(data, len);
    return c.value();
}

}  // namespace hiersynth
