#pragma once

#include <json.hpp>

#include "jaguar/decomposition.hpp"
#include "jaguar/engine.hpp"
#include "jaguar/set_function.hpp"
#include "jaguar/width.hpp"

namespace jaguar {

using Json = nlohmann::ordered_json;

// A number, or "inf".
Json number_json(double v);
// Variable names in universe order.
Json varset_json(VarSet s, const Universe& u);
// {"<comma-joined sorted names>": value}; the empty set's key is "".
Json set_function_json(const SetFunction& g, const Universe& u);
Json td_json(const TreeDecomposition& td, const Universe& u);
Json family_json(const std::vector<TreeDecomposition>& family, const Universe& u);
Json trace_json(const RecursionTrace& trace, const Universe& u);
Json width_json(const WidthResult& w, const Universe& u);

}  // namespace jaguar
