#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jaguar {

// Hard ceiling imposed by the 32-bit encoding. The configurable limit
// (default 12, JAGUAR_MAX_VARS) is checked separately.
inline constexpr int kMaxEncodableVars = 31;
inline constexpr int kDefaultMaxVars = 12;

// Effective |V| limit: JAGUAR_MAX_VARS if set and valid, else the default.
int configured_max_vars();

// A subset of the variable universe. Bit i stands for the variable with
// index i, so the integer encoding doubles as the canonical tie-break key
// and as the index into dense set-function tables.
class VarSet {
public:
    using Bits = std::uint32_t;

    constexpr VarSet() = default;
    constexpr explicit VarSet(Bits bits) : bits_(bits) {}

    static constexpr VarSet single(int var) { return VarSet(Bits{1} << var); }
    static constexpr VarSet full(int num_vars) {
        return VarSet(num_vars >= 32 ? ~Bits{0} : (Bits{1} << num_vars) - 1);
    }

    constexpr Bits bits() const { return bits_; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool contains(int var) const { return (bits_ >> var) & 1U; }

    constexpr bool subset_of(VarSet other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr bool strict_subset_of(VarSet other) const {
        return subset_of(other) && bits_ != other.bits_;
    }

    constexpr VarSet operator|(VarSet o) const { return VarSet(bits_ | o.bits_); }
    constexpr VarSet operator&(VarSet o) const { return VarSet(bits_ & o.bits_); }
    constexpr VarSet operator-(VarSet o) const { return VarSet(bits_ & ~o.bits_); }
    constexpr VarSet& operator|=(VarSet o) { bits_ |= o.bits_; return *this; }

    constexpr auto operator<=>(const VarSet&) const = default;

    // Members in ascending variable order.
    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(size());
        for (Bits b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
        return out;
    }

    // Position of `var` among the members (its column in a relation over
    // this schema). Requires contains(var).
    constexpr int rank_of(int var) const {
        return std::popcount(bits_ & ((Bits{1} << var) - 1));
    }

private:
    Bits bits_ = 0;
};

// Calls fn(subset) for every subset of `set`, including ∅ and `set`.
template <typename Fn>
void for_each_subset(VarSet set, Fn&& fn) {
    const VarSet::Bits full = set.bits();
    VarSet::Bits sub = full;
    while (true) {
        fn(VarSet(sub));
        if (sub == 0) break;
        sub = (sub - 1) & full;
    }
}

// Interned variable names; index order is the fixed variable order.
class Universe {
public:
    Universe() = default;
    explicit Universe(std::vector<std::string> names);

    // Returns the index of `name`, adding it if absent.
    int intern(std::string_view name);
    std::optional<int> find(std::string_view name) const;

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int var) const { return names_.at(var); }
    const std::vector<std::string>& names() const { return names_; }
    VarSet all() const { return VarSet::full(size()); }

    std::vector<std::string> names_of(VarSet set) const;
    // Compact rendering, e.g. "XYZ" or "{}" for the empty set; uses
    // comma separation when some name is longer than one character.
    std::string render(VarSet set) const;

    bool operator==(const Universe&) const = default;

private:
    std::vector<std::string> names_;
};

}  // namespace jaguar

template <>
struct std::hash<jaguar::VarSet> {
    std::size_t operator()(jaguar::VarSet s) const noexcept { return s.bits(); }
};
