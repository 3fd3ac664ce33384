#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jaguar {

// An interned domain value. Equality is id equality; the id order is the
// (arbitrary but fixed) total order used inside relations.
enum class Value : std::uint32_t {};

// Maps external string renderings to Values and back.
class Dictionary {
public:
    Value intern(std::string_view text);
    Value intern_int(long long v) { return intern(std::to_string(v)); }
    const std::string& text(Value v) const { return texts_.at(static_cast<std::uint32_t>(v)); }
    std::size_t size() const { return texts_.size(); }

    // Presentation order for sorted output: integer renderings compare
    // numerically and precede all other strings, which compare bytewise.
    bool display_less(Value a, Value b) const;

private:
    std::vector<std::string> texts_;
    std::unordered_map<std::string, Value> ids_;
};

}  // namespace jaguar
