#include "jaguar/varset.hpp"

#include <algorithm>
#include <cstdlib>

#include "jaguar/error.hpp"

namespace jaguar {

int configured_max_vars() {
    if (const char* env = std::getenv("JAGUAR_MAX_VARS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= kMaxEncodableVars) return static_cast<int>(v);
    }
    return kDefaultMaxVars;
}

Universe::Universe(std::vector<std::string> names) {
    for (auto& n : names) intern(n);
}

int Universe::intern(std::string_view name) {
    if (auto found = find(name)) return *found;
    if (size() >= kMaxEncodableVars) throw LimitError("too many variables for the set encoding");
    names_.emplace_back(name);
    return size() - 1;
}

std::optional<int> Universe::find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<int>(it - names_.begin());
}

std::vector<std::string> Universe::names_of(VarSet set) const {
    std::vector<std::string> out;
    for (int v : set.members()) out.push_back(name(v));
    return out;
}

std::string Universe::render(VarSet set) const {
    if (set.empty()) return "{}";
    const bool short_names =
        std::all_of(names_.begin(), names_.end(), [](const std::string& n) { return n.size() == 1; });
    std::string out;
    for (int v : set.members()) {
        if (!short_names && !out.empty()) out += ',';
        out += name(v);
    }
    return out;
}

}  // namespace jaguar
