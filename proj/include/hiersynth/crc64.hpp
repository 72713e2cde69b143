#pragma once

#include <cstddef>
#include <cstdint>

namespace hiersynth {

// CRC-64/XZ (reflected ECMA-182 polynomial).  Used both as the file checksum
// and, over canonical serializations, as the fingerprint of gate sets and
// cost models.
class Crc64 {
public:
    void update(const void* data, std::size_t len);

    template <typename T>
    void update_value(const T& v) {
        update(&v, sizeof v);
    }

    std::uint64_t value() const { return ~state_; }

private:
    std::uint64_t state_ = ~0ull;
};

std::uint64_t crc64(const void* data, std::size_t len);

}  // namespace hiersynth
