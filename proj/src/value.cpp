#include "jaguar/value.hpp"

#include <charconv>
#include <optional>

namespace jaguar {

namespace {

std::optional<long long> as_integer(const std::string& s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

Value Dictionary::intern(std::string_view text) {
    std::string key(text);
    if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    const Value id{static_cast<std::uint32_t>(texts_.size())};
    texts_.push_back(key);
    ids_.emplace(std::move(key), id);
    return id;
}

bool Dictionary::display_less(Value a, Value b) const {
    if (a == b) return false;
    const std::string& sa = text(a);
    const std::string& sb = text(b);
    const auto ia = as_integer(sa);
    const auto ib = as_integer(sb);
    if (ia && ib) return *ia != *ib ? *ia < *ib : sa < sb;
    if (ia.has_value() != ib.has_value()) return ia.has_value();
    return sa < sb;
}

}  // namespace jaguar
