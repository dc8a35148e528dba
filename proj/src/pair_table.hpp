#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace bdz::detail {

// Open-addressing map from an ordered pair of ids to an id. Rebuilt per
// diagram level, so it never grows past the capacity reserved up front.
class PairTable {
public:
    static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

    void reset(std::size_t expected) {
        std::size_t cap = std::bit_ceil(expected * 2 + 16);
        if (slots_.size() < cap || slots_.size() > cap * 8) {
            slots_.assign(cap, Slot{});
        } else {
            std::fill(slots_.begin(), slots_.end(), Slot{});
        }
        mask_ = slots_.size() - 1;
    }

    // Returns the stored value, inserting `fresh` if the key is new.
    std::uint64_t find_or_insert(std::uint64_t a, std::uint64_t b, std::uint64_t fresh, bool& inserted) {
        std::size_t i = hash(a, b) & mask_;
        while (true) {
            Slot& s = slots_[i];
            if (s.a == kEmpty) {
                s = Slot{a, b, fresh};
                inserted = true;
                return fresh;
            }
            if (s.a == a && s.b == b) {
                inserted = false;
                return s.value;
            }
            i = (i + 1) & mask_;
        }
    }

private:
    struct Slot {
        std::uint64_t a = kEmpty;
        std::uint64_t b = 0;
        std::uint64_t value = 0;
    };

    static std::size_t hash(std::uint64_t a, std::uint64_t b) {
        std::uint64_t h = a * 0x9E3779B97F4A7C15ull ^ (b + 0x632BE59BD9B4E019ull) * 0xC2B2AE3D27D4EB4Full;
        h ^= h >> 31;
        h *= 0x94D049BB133111EBull;
        h ^= h >> 29;
        return static_cast<std::size_t>(h);
    }

    std::vector<Slot> slots_;
    std::size_t mask_ = 0;
};

}  // namespace bdz::detail
