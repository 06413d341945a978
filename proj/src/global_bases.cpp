#include "gbdi/global_bases.hpp"

#include <algorithm>
#include <random>

namespace gbdi {

namespace {

std::uint64_t abs_diff(word_t a, word_t b) { return a > b ? a - b : b - a; }

std::uint64_t magnitude(std::int64_t d) {
    return d < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(d) : static_cast<std::uint64_t>(d);
}

} // namespace

std::vector<word_t> sample_values(std::span<const word_t> values, std::size_t max_sample, std::uint64_t seed) {
    if (values.size() <= max_sample) return {values.begin(), values.end()};
    const std::size_t stride = values.size() / max_sample;
    const std::size_t phase = seed % stride;
    std::vector<word_t> out(max_sample);
    for (std::size_t i = 0; i < max_sample; ++i) out[i] = values[phase + i * stride];
    return out;
}

std::vector<word_t> initial_centers(std::span<const word_t> sample, unsigned k, std::uint64_t seed) {
    std::vector<word_t> distinct(sample.begin(), sample.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    if (distinct.size() <= k) {
        std::vector<word_t> centers = distinct;
        const word_t last = centers.empty() ? 0 : centers.back();
        centers.resize(k, last);
        return centers;
    }

    // Draw sample positions, so frequent values are proportionally likely.
    // Heavily skewed samples fall back to drawing among distinct values.
    std::mt19937_64 rng(seed);
    std::vector<word_t> centers;
    std::vector<word_t> taken; // sorted copy of centers
    centers.reserve(k);
    const std::size_t max_attempts = std::size_t{64} * k;
    for (std::size_t attempt = 0; centers.size() < k; ++attempt) {
        const word_t v = attempt < max_attempts ? sample[rng() % sample.size()] : distinct[rng() % distinct.size()];
        auto it = std::lower_bound(taken.begin(), taken.end(), v);
        if (it != taken.end() && *it == v) continue;
        taken.insert(it, v);
        centers.push_back(v);
    }
    return centers;
}

NearestCenter::NearestCenter(std::span<const word_t> centers) {
    std::vector<std::pair<word_t, unsigned>> order;
    order.reserve(centers.size());
    for (unsigned i = 0; i < centers.size(); ++i) order.emplace_back(centers[i], i);
    std::sort(order.begin(), order.end());
    for (const auto &[value, index] : order) {
        if (!sorted_.empty() && sorted_.back() == value) continue; // lowest index wins
        sorted_.push_back(value);
        index_.push_back(index);
    }
}

unsigned NearestCenter::operator()(word_t v) const {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), v);
    const auto hi = static_cast<std::size_t>(it - sorted_.begin());
    if (hi == sorted_.size()) return index_[hi - 1];
    if (hi == 0 || sorted_[hi] == v) return index_[hi];
    const std::uint64_t up = sorted_[hi] - v;
    const std::uint64_t down = v - sorted_[hi - 1];
    if (up != down) return up < down ? index_[hi] : index_[hi - 1];
    return std::min(index_[hi], index_[hi - 1]);
}

namespace {

struct Range {
    std::size_t begin = 0, end = 0;
    std::size_t count() const { return end - begin; }
};

// In one dimension every nearest-center cell is a contiguous run of the sorted
// sample. Returns the run of each center (empty for duplicate centers), with the
// same tie-breaking as NearestCenter.
std::vector<Range> voronoi_ranges(std::span<const word_t> sorted, std::span<const word_t> centers) {
    std::vector<std::pair<word_t, unsigned>> order;
    for (unsigned i = 0; i < centers.size(); ++i) order.emplace_back(centers[i], i);
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end(),
                    [](const auto &x, const auto &y) { return x.first == y.first; }),
        order.end());

    std::vector<Range> ranges(centers.size());
    std::size_t begin = 0;
    for (std::size_t j = 0; j < order.size(); ++j) {
        std::size_t end = sorted.size();
        if (j + 1 < order.size()) {
            const auto [a, ia] = order[j];
            const auto [b, ib] = order[j + 1];
            const auto it = std::partition_point(sorted.begin() + static_cast<std::ptrdiff_t>(begin), sorted.end(),
                [&](word_t v) {
                    const std::uint64_t da = abs_diff(v, a), db = abs_diff(v, b);
                    return da < db || (da == db && ia < ib);
                });
            end = static_cast<std::size_t>(it - sorted.begin());
        }
        ranges[order[j].second] = {begin, end};
        begin = end;
    }
    return ranges;
}

std::vector<word_t> lloyd_sorted(std::span<const word_t> sorted, std::vector<word_t> centers, unsigned max_iters,
    LloydTrace *trace) {
    LloydTrace local;
    const std::size_t n = sorted.size();
    const std::size_t k = centers.size();
    std::vector<unsigned __int128> prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];

    for (unsigned iter = 0; iter < max_iters && n > 0 && k > 0; ++iter) {
        std::vector<Range> ranges = voronoi_ranges(sorted, centers);
        Inertia inertia;
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t i = ranges[c].begin; i < ranges[c].end; ++i) {
                inertia.add_square(abs_diff(sorted[i], centers[c]));
            }
        }
        local.inertia.push_back(inertia);
        local.iterations = iter + 1;

        // Reseed each empty cluster with the value farthest from its center; a
        // cluster's farthest values sit at the ends of its run. All copies of
        // the chosen value move together so runs stay contiguous.
        for (std::size_t c = 0; c < k; ++c) {
            if (ranges[c].count() != 0) continue;
            std::size_t from = k, at = 0;
            std::uint64_t best = 0;
            for (std::size_t o = 0; o < k; ++o) {
                const Range r = ranges[o];
                if (r.count() == 0) continue;
                for (const std::size_t i : {r.begin, r.end - 1}) {
                    const std::uint64_t d = abs_diff(sorted[i], centers[o]);
                    if (d > best) {
                        best = d;
                        from = o;
                        at = i;
                    }
                }
            }
            if (from == k) break; // every point sits on a center
            Range &src = ranges[from];
            const word_t v = sorted[at];
            if (at == src.begin) {
                std::size_t e = src.begin;
                while (e < src.end && sorted[e] == v) ++e;
                ranges[c] = {src.begin, e};
                src.begin = e;
            } else {
                std::size_t b = src.end;
                while (b > src.begin && sorted[b - 1] == v) --b;
                ranges[c] = {b, src.end};
                src.end = b;
            }
            centers[c] = v;
        }

        std::vector<word_t> next = centers;
        for (std::size_t c = 0; c < k; ++c) {
            const std::uint64_t count = ranges[c].count();
            if (count == 0) continue;
            const unsigned __int128 sum = prefix[ranges[c].end] - prefix[ranges[c].begin];
            next[c] = static_cast<word_t>((sum + count / 2) / count);
        }
        if (next == centers) {
            local.converged = true;
            break;
        }
        centers = std::move(next);
    }
    if (trace) *trace = std::move(local);
    return centers;
}

std::vector<word_t> sorted_copy(std::span<const word_t> sample) {
    std::vector<word_t> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

// Greedy disjoint windows of a sorted pool, densest first (ties to the lower
// start). Each window starts at a value and spans at most span above it.
std::vector<Range> dense_windows(std::span<const word_t> pool, word_t span, std::size_t limit,
    std::size_t min_count) {
    const std::size_t m = pool.size();
    std::vector<std::size_t> ends(m);
    std::size_t hi = 0, max_count = 0;
    for (std::size_t lo = 0; lo < m; ++lo) {
        hi = std::max(hi, lo);
        while (hi < m && pool[hi] - pool[lo] <= span) ++hi;
        ends[lo] = hi;
        max_count = std::max(max_count, hi - lo);
    }

    // Counting sort of window starts by count, descending.
    std::vector<Range> picked;
    if (max_count <= min_count) return picked;
    std::vector<std::size_t> bucket(max_count + 2, 0);
    for (std::size_t lo = 0; lo < m; ++lo) ++bucket[max_count - (ends[lo] - lo) + 1];
    for (std::size_t i = 1; i < bucket.size(); ++i) bucket[i] += bucket[i - 1];
    std::vector<std::size_t> starts(m);
    for (std::size_t lo = 0; lo < m; ++lo) starts[bucket[max_count - (ends[lo] - lo)]++] = lo;

    // In descending-count order a window can only overlap a picked one at an end.
    std::vector<bool> used(m, false);
    for (const std::size_t lo : starts) {
        const Range w{lo, ends[lo]};
        if (picked.size() == limit || w.count() <= min_count) break;
        if (used[w.begin] || used[w.end - 1]) continue;
        std::fill(used.begin() + static_cast<std::ptrdiff_t>(w.begin),
            used.begin() + static_cast<std::ptrdiff_t>(w.end), true);
        picked.push_back(w);
    }
    return picked;
}

// Sorted indices of values v with (center - v) inside [-reach_down, reach_up].
Range reach(std::span<const word_t> sorted, Range within, word_t center, word_t below, word_t above) {
    const word_t lo = center >= below ? center - below : 0;
    const word_t hi = ~word_t{0} - center >= above ? center + above : ~word_t{0};
    const auto first = sorted.begin() + static_cast<std::ptrdiff_t>(within.begin);
    const auto last = sorted.begin() + static_cast<std::ptrdiff_t>(within.end);
    const auto b = std::lower_bound(first, last, lo);
    const auto e = std::upper_bound(b, last, hi);
    return {static_cast<std::size_t>(b - sorted.begin()), static_cast<std::size_t>(e - sorted.begin())};
}

void append_run(std::span<const word_t> sorted, std::size_t begin, std::size_t end, std::vector<word_t> &out) {
    if (end > begin) {
        out.insert(out.end(), sorted.begin() + static_cast<std::ptrdiff_t>(begin),
            sorted.begin() + static_cast<std::ptrdiff_t>(end));
    }
}

std::vector<word_t> refine_sorted(std::span<const word_t> sorted, std::vector<word_t> centers, unsigned rounds) {
    const std::size_t k = centers.size();
    if (k == 0 || sorted.empty()) return centers;

    for (unsigned round = 0; round < rounds; ++round) {
        const std::vector<Range> cells = voronoi_ranges(sorted, centers);

        // Delta B - V in [-32768, 32767] means V in [B - 32767, B + 32768]; D8 likewise.
        std::vector<Range> inliers(k), fine(k);
        for (std::size_t c = 0; c < k; ++c) {
            inliers[c] = reach(sorted, cells[c], centers[c], 32767, 32768);
            fine[c] = reach(sorted, inliers[c], centers[c], 127, 128);
        }

        std::vector<word_t> next = centers;
        for (std::size_t c = 0; c < k; ++c) {
            if (inliers[c].count()) next[c] = sorted[inliers[c].begin + (inliers[c].count() - 1) / 2];
        }

        // Cells are disjoint and ordered, so the pools come out sorted.
        std::vector<std::size_t> by_value(k);
        for (std::size_t c = 0; c < k; ++c) by_value[c] = c;
        std::sort(by_value.begin(), by_value.end(), [&](std::size_t x, std::size_t y) {
            return std::pair(cells[x].begin, cells[x].end) < std::pair(cells[y].begin, cells[y].end);
        });
        std::vector<word_t> stray, coarse;
        for (const std::size_t c : by_value) {
            if (cells[c].count() == 0) continue;
            append_run(sorted, cells[c].begin, inliers[c].begin, stray);
            append_run(sorted, inliers[c].begin, fine[c].begin, coarse);
            append_run(sorted, fine[c].end, inliers[c].end, coarse);
            append_run(sorted, inliers[c].end, cells[c].end, stray);
        }

        // Weakest bases first: cover the densest 16-bit windows of strays, then
        // split the densest 8-bit windows of values no base reaches with a D8 delta.
        std::vector<std::size_t> order(k);
        for (std::size_t c = 0; c < k; ++c) order[c] = c;
        std::stable_sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return inliers[x].count() < inliers[y].count(); });
        std::size_t weakest = 0;
        auto relocate = [&](const std::vector<word_t> &pool, word_t span) {
            if (weakest == k) return;
            const auto windows = dense_windows(pool, span, k - weakest, inliers[order[weakest]].count());
            for (const Range &w : windows) {
                const std::size_t c = order[weakest];
                if (w.count() <= inliers[c].count()) break;
                next[c] = pool[w.begin + (w.count() - 1) / 2];
                ++weakest;
            }
        };
        relocate(stray, 0xFFFF);
        relocate(coarse, 0xFF);

        if (next == centers) break;
        centers = std::move(next);
    }
    return centers;
}

} // namespace

std::vector<word_t> lloyd(std::span<const word_t> sample, std::vector<word_t> centers, unsigned max_iters,
    LloydTrace *trace) {
    return lloyd_sorted(sorted_copy(sample), std::move(centers), max_iters, trace);
}

std::vector<word_t> refine_bases(std::span<const word_t> sample, std::vector<word_t> centers, unsigned rounds) {
    return refine_sorted(sorted_copy(sample), std::move(centers), rounds);
}

std::vector<std::uint8_t> max_delta_widths(std::span<const word_t> sample, std::span<const word_t> bases,
    unsigned word_size) {
    std::vector<std::uint8_t> widths(bases.size(), 0);
    if (bases.empty()) return widths;
    const NearestCenter nearest(bases);
    for (const word_t v : sample) {
        const unsigned i = nearest(v);
        const SizeClass c = classify_delta(modular_delta(bases[i], v, 8 * word_size));
        if (c == SizeClass::outlier) continue;
        widths[i] = std::max<std::uint8_t>(widths[i], static_cast<std::uint8_t>(delta_bits(c)));
    }
    return widths;
}

BaseTable kmeans_global_bases(std::span<const word_t> sample, const Config &cfg, LloydTrace *trace) {
    const auto sorted = sorted_copy(sample);
    BaseTable table;
    auto centers = lloyd_sorted(sorted, initial_centers(sample, cfg.k, cfg.seed), cfg.max_iters, trace);
    table.bases = refine_sorted(sorted, std::move(centers), cfg.max_iters);
    table.max_widths = max_delta_widths(sorted, table.bases, cfg.word_size);
    return table;
}

std::optional<DeltaAssignment> assign_nearest_base(word_t value, const BaseTable &table, unsigned word_size) {
    const unsigned bits = 8 * word_size;
    std::optional<DeltaAssignment> best;
    std::uint64_t best_mag = 0;
    for (unsigned i = 0; i < table.bases.size(); ++i) {
        const std::int64_t delta = modular_delta(table.bases[i], value, bits);
        const SizeClass c = classify_delta(delta);
        if (c == SizeClass::outlier || delta_bits(c) > table.max_widths[i]) continue;
        const std::uint64_t mag = magnitude(delta);
        if (!best || delta_bits(c) < delta_bits(best->size_class)
            || (delta_bits(c) == delta_bits(best->size_class) && mag < best_mag)) {
            best = DeltaAssignment{i, delta, c};
            best_mag = mag;
            if (c == SizeClass::zero) break;
        }
    }
    return best;
}

BaseLookup::BaseLookup(const BaseTable &table, unsigned word_size)
    : bits_(8 * word_size), mask_(word_size == 8 ? ~word_t{0} : (word_t{1} << (8 * word_size)) - 1) {
    for (unsigned i = 0; i < table.bases.size(); ++i) sorted_.push_back({table.bases[i], i, table.max_widths[i]});
    std::stable_sort(sorted_.begin(), sorted_.end(), [](const Entry &a, const Entry &b) { return a.base < b.base; });
}

std::optional<DeltaAssignment> BaseLookup::operator()(word_t value) const {
    // Bases b with (b - value) mod 2^bits in [-32768, 32767] form one circular run.
    const word_t lo = (value - 32768) & mask_;
    std::size_t j = static_cast<std::size_t>(
        std::lower_bound(sorted_.begin(), sorted_.end(), lo, [](const Entry &e, word_t v) { return e.base < v; })
        - sorted_.begin());
    std::optional<DeltaAssignment> best;
    std::uint64_t best_mag = 0;
    for (std::size_t step = 0; step < sorted_.size(); ++step, ++j) {
        if (j == sorted_.size()) j = 0;
        const Entry &e = sorted_[j];
        if (((e.base - lo) & mask_) > 65535) break;
        const std::int64_t delta = modular_delta(e.base, value, bits_);
        const SizeClass c = classify_delta(delta);
        if (delta_bits(c) > e.max_width) continue;
        const std::uint64_t mag = magnitude(delta);
        if (!best || delta_bits(c) < delta_bits(best->size_class)
            || (delta_bits(c) == delta_bits(best->size_class)
                && (mag < best_mag || (mag == best_mag && e.index < best->base_index)))) {
            best = DeltaAssignment{e.index, delta, c};
            best_mag = mag;
        }
    }
    return best;
}

} // namespace gbdi
