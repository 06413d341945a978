#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gbdi {

/// MSB-first bit packer; the last byte is zero padded.
class BitWriter {
public:
    explicit BitWriter(std::vector<std::uint8_t> &out) : out_(out) {}

    /// Appends the low width bits of value (width <= 64), most significant first.
    void put(std::uint64_t value, unsigned width) {
        while (width > 0) {
            if (used_ == 0) out_.push_back(0);
            const unsigned free = 8 - used_;
            const unsigned take = width < free ? width : free;
            const auto chunk = static_cast<unsigned>(value >> (width - take)) & ((1u << take) - 1);
            out_.back() |= static_cast<std::uint8_t>(chunk << (free - take));
            used_ = (used_ + take) & 7;
            width -= take;
        }
    }

private:
    std::vector<std::uint8_t> &out_;
    unsigned used_ = 0; // bits used in out_.back(), 0 means a fresh byte is needed
};

/// MSB-first bit reader over a bounded byte range. Reads past the end fail
/// instead of touching memory outside the span.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

    /// Returns false (and reads nothing) if fewer than width bits remain.
    bool get(unsigned width, std::uint64_t &value) {
        if (width > data_.size() * 8 - pos_) return false;
        std::uint64_t v = 0;
        while (width > 0) {
            const unsigned avail = 8 - static_cast<unsigned>(pos_ & 7);
            const unsigned take = width < avail ? width : avail;
            v = (v << take) | ((data_[pos_ >> 3] >> (avail - take)) & ((1u << take) - 1));
            pos_ += take;
            width -= take;
        }
        value = v;
        return true;
    }

    std::size_t bit_position() const { return pos_; }
    std::size_t bytes_consumed() const { return (pos_ + 7) / 8; }

    /// True if every bit between the position and the next byte boundary is zero.
    bool padding_is_zero() const {
        if ((pos_ & 7) == 0) return true;
        const unsigned mask = 0xFFu >> (pos_ & 7);
        return (data_[pos_ >> 3] & mask) == 0;
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace gbdi
