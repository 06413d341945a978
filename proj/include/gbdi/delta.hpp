#pragma once

#include <cstdint>
#include <optional>

namespace gbdi {

/// Per-value 2-bit tag in the block stream.
enum class SizeClass : std::uint8_t {
    zero = 0b00,
    d8 = 0b01,
    d16 = 0b10,
    outlier = 0b11,
};

/// Delta field width in bits (0 for zero and outlier).
constexpr unsigned delta_bits(SizeClass c) {
    switch (c) {
    case SizeClass::d8: return 8;
    case SizeClass::d16: return 16;
    default: return 0;
    }
}

/// Smallest class whose signed range holds delta, or outlier.
constexpr SizeClass classify_delta(std::int64_t delta) {
    if (delta == 0) return SizeClass::zero;
    if (delta >= -128 && delta <= 127) return SizeClass::d8;
    if (delta >= -32768 && delta <= 32767) return SizeClass::d16;
    return SizeClass::outlier;
}

/// Encoding decision for one value: V = B[base_index] - delta (mod 2^word_bits).
struct DeltaAssignment {
    unsigned base_index = 0;
    std::int64_t delta = 0;
    SizeClass size_class = SizeClass::zero;

    friend bool operator==(const DeltaAssignment &, const DeltaAssignment &) = default;
};

/// (base - value) mod 2^bits, read back as a signed bits-wide integer.
constexpr std::int64_t modular_delta(std::uint64_t base, std::uint64_t value, unsigned word_bits) {
    std::uint64_t d = base - value;
    if (word_bits < 64) {
        const std::uint64_t sign = std::uint64_t{1} << (word_bits - 1);
        d &= (sign << 1) - 1;
        d = (d ^ sign) - sign;
    }
    return static_cast<std::int64_t>(d);
}

} // namespace gbdi
