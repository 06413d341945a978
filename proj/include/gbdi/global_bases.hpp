#pragma once

#include "gbdi/config.hpp"
#include "gbdi/delta.hpp"

#include <compare>
#include <optional>
#include <vector>

namespace gbdi {

/// The global base table shared by every block of a container.
struct BaseTable {
    std::vector<word_t> bases;
    /// Largest delta width (0, 8 or 16 bits) each base may serve.
    std::vector<std::uint8_t> max_widths;

    std::size_t size() const { return bases.size(); }
    friend bool operator==(const BaseTable &, const BaseTable &) = default;
};

/// Exact sum of squared 64-bit differences (needs more than 128 bits for 8-byte words).
class Inertia {
public:
    void add_square(std::uint64_t diff) {
        const unsigned __int128 sq = static_cast<unsigned __int128>(diff) * diff;
        const unsigned __int128 prev = low_;
        low_ += sq;
        if (low_ < prev) ++high_;
    }
    void add(const Inertia &o) {
        const unsigned __int128 prev = low_;
        low_ += o.low_;
        high_ += o.high_ + (low_ < prev ? 1 : 0);
    }
    long double approx() const {
        return static_cast<long double>(high_) * 0x1p128L + static_cast<long double>(low_);
    }
    friend std::strong_ordering operator<=>(const Inertia &a, const Inertia &b) {
        if (auto c = a.high_ <=> b.high_; c != 0) return c;
        return a.low_ == b.low_ ? std::strong_ordering::equal
             : a.low_ < b.low_  ? std::strong_ordering::less
                                : std::strong_ordering::greater;
    }
    friend bool operator==(const Inertia &, const Inertia &) = default;

private:
    unsigned __int128 low_ = 0;
    std::uint64_t high_ = 0;
};

/// Per-run record of Lloyd's iterations, used by tests and diagnostics.
struct LloydTrace {
    /// Inertia of the assignment step of every iteration, in order.
    std::vector<Inertia> inertia;
    unsigned iterations = 0;
    bool converged = false;
};

/// Deterministic stride sample: identity when values.size() <= max_sample,
/// otherwise exactly max_sample values at phase + i * stride.
std::vector<word_t> sample_values(std::span<const word_t> values, std::size_t max_sample, std::uint64_t seed);

/// k pairwise-distinct initial centers drawn from the sample with the given seed.
/// With fewer than k distinct values, returns the sorted distinct values padded
/// with copies of the last one.
std::vector<word_t> initial_centers(std::span<const word_t> sample, unsigned k, std::uint64_t seed);

/// Lloyd's algorithm in one dimension starting from centers; returns the final centers.
std::vector<word_t> lloyd(std::span<const word_t> sample, std::vector<word_t> centers, unsigned max_iters,
    LloydTrace *trace = nullptr);

/// Size-aware polish of converged centers. Each round moves every center to the
/// lower median of the nearest sample points its 16-bit delta range covers, then
/// relocates the centers covering the fewest points onto the densest uncovered
/// 16-bit windows. Stops at a fixpoint or after rounds rounds.
std::vector<word_t> refine_bases(std::span<const word_t> sample, std::vector<word_t> centers, unsigned rounds);

/// Index of the center with the smallest |v - c| (ties to the lowest index).
class NearestCenter {
public:
    explicit NearestCenter(std::span<const word_t> centers);
    unsigned operator()(word_t v) const;

private:
    std::vector<word_t> sorted_;
    std::vector<unsigned> index_;
};

/// Maximum delta width per base over the sample points nearest to it.
std::vector<std::uint8_t> max_delta_widths(std::span<const word_t> sample, std::span<const word_t> bases,
    unsigned word_size);

/// Clusters the sample into cfg.k global bases and derives their maximum delta widths.
BaseTable kmeans_global_bases(std::span<const word_t> sample, const Config &cfg, LloydTrace *trace = nullptr);

/// Cheapest valid (base, class) for value, by (class width, |delta|, index);
/// nullopt when the value must be stored as an outlier.
std::optional<DeltaAssignment> assign_nearest_base(word_t value, const BaseTable &table, unsigned word_size);

/// Same answers as assign_nearest_base, but only looks at the bases within
/// 16-bit reach of the value (binary search over the sorted table).
class BaseLookup {
public:
    BaseLookup(const BaseTable &table, unsigned word_size);
    std::optional<DeltaAssignment> operator()(word_t value) const;

private:
    struct Entry {
        word_t base;
        unsigned index;
        std::uint8_t max_width;
    };
    std::vector<Entry> sorted_;
    unsigned bits_;
    word_t mask_;
};

} // namespace gbdi
