#include "jaguar/json_io.hpp"

namespace jaguar {

Json number_json(double v) {
    if (is_inf(v)) return "inf";
    if (v == -kInf) return "-inf";
    return v;
}

Json varset_json(VarSet s, const Universe& u) {
    Json out = Json::array();
    for (const auto& name : u.names_of(s)) out.push_back(name);
    return out;
}

Json set_function_json(const SetFunction& g, const Universe& u) {
    Json out = Json::object();
    for (std::size_t bits = 0; bits < g.table_size(); ++bits) {
        const VarSet s(static_cast<VarSet::Bits>(bits));
        std::string key;
        for (const auto& name : u.names_of(s)) key += (key.empty() ? "" : ",") + name;
        out[key] = number_json(g(s));
    }
    return out;
}

Json td_json(const TreeDecomposition& td, const Universe& u) {
    Json bags = Json::array();
    for (VarSet b : td.bags) bags.push_back(varset_json(b, u));
    Json edges = Json::array();
    for (auto [a, b] : td.edges) edges.push_back(Json::array({a, b}));
    return Json{{"bags", bags}, {"edges", edges}, {"free_core", td.free_core}};
}

Json family_json(const std::vector<TreeDecomposition>& family, const Universe& u) {
    Json tds = Json::array();
    for (const auto& td : family) tds.push_back(td_json(td, u));
    return Json{{"tds", tds}};
}

Json trace_json(const RecursionTrace& trace, const Universe& u) {
    Json nodes = Json::array();
    for (const TraceNode& n : trace.nodes) {
        Json j;
        j["id"] = n.id;
        j["parent"] = n.parent ? Json(*n.parent) : Json(nullptr);
        j["edge"] = edge_name(n.edge);
        j["light_index"] = n.light_index ? Json(*n.light_index) : Json(nullptr);
        j["status"] = status_name(n.status);
        const bool live = n.status != TraceNode::Status::Empty;
        j["c"] = live ? number_json(n.c) : Json(nullptr);
        j["X"] = varset_json(n.witness ? n.witness->x : VarSet{}, u);
        j["Y"] = varset_json(n.witness ? n.witness->y : VarSet{}, u);
        j["W"] = varset_json(n.w, u);
        j["theta"] = n.theta;
        j["I_size"] = n.i_size;
        j["join_out"] = n.join_out;
        j["terminal_td"] = n.terminal_td ? Json(*n.terminal_td) : Json(nullptr);
        j["phi"] = live ? number_json(n.phi) : Json(nullptr);
        j["depth"] = n.depth;
        j["y_size"] = n.y_size;
        j["heavy_size"] = n.heavy_size;
        j["light_size"] = n.light_size;
        j["part_sizes"] = n.part_sizes;
        j["work"] = n.work;
        j["answers"] = n.answers;
        if (n.g) j["g"] = set_function_json(*n.g, u);
        nodes.push_back(std::move(j));
    }
    return Json{{"N", trace.n}, {"epsilon", trace.epsilon}, {"nodes", nodes}};
}

Json width_json(const WidthResult& w, const Universe& u) {
    Json selector = Json::array();
    for (VarSet b : w.selector) selector.push_back(varset_json(b, u));
    Json out;
    out["subw"] = number_json(w.subw);
    out["selector"] = selector;
    out["certificate"] = w.certificate.table_size() ? set_function_json(w.certificate, u) : Json::object();
    if (w.unbounded) out["certificate_kind"] = "ray";
    out["incomplete"] = w.incomplete;
    out["lps_solved"] = w.lps_solved;
    return out;
}

}  // namespace jaguar
