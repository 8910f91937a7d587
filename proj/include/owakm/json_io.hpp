#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "owakm/instance.hpp"
#include "owakm/reduce.hpp"
#include "owakm/tournament.hpp"
#include "owakm/weights.hpp"

namespace owakm::io {

using nlohmann::json;

// Weight schema: {"kind":"harmonic"} | {"kind":"geometric","p":num}
//              | {"kind":"top_r","r":int} | {"kind":"custom","values":[...]}.
// Numbers may be given as strings ("1/3", "0.25") to keep them exactly
// rational; plain custom floats parse but carry no exact view.
inline WeightVector weights_from_json(const json& j, int k) {
    if (!j.is_object() || !j.contains("kind")) throw InputError("weights: expected an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "harmonic") return WeightVector::harmonic(k);
    if (kind == "geometric") {
        if (!j.contains("p")) throw InputError("weights: geometric kind needs 'p'");
        const auto& p = j.at("p");
        if (p.is_string()) return WeightVector::geometric(k, rational_from_decimal(p.get<std::string>()));
        return WeightVector::geometric(k, p.get<double>());
    }
    if (kind == "top_r") {
        if (!j.contains("r")) throw InputError("weights: top_r kind needs 'r'");
        return WeightVector::top_r(k, j.at("r").get<int>());
    }
    if (kind == "custom") {
        if (!j.contains("values") || !j.at("values").is_array()) throw InputError("weights: custom kind needs 'values'");
        const auto& vals = j.at("values");
        bool any_string  = false;
        for (const auto& v : vals)
            if (v.is_string()) any_string = true;
        if (any_string) {
            std::vector<Rational> exact;
            for (const auto& v : vals)
                exact.push_back(v.is_string() ? rational_from_decimal(v.get<std::string>())
                                              : rational_from_shortest_decimal(v.get<double>()));
            return WeightVector::custom_rational(std::move(exact));
        }
        std::vector<double> values;
        for (const auto& v : vals) values.push_back(v.get<double>());
        return WeightVector::custom(std::move(values));
    }
    throw InputError("weights: unknown kind '" + kind + "'");
}

inline json weights_to_json(const WeightVector& w) {
    json j;
    switch (w.family()) {
        case WeightFamily::harmonic: j["kind"] = "harmonic"; break;
        case WeightFamily::geometric:
            j["kind"] = "geometric";
            j["p"]    = w.geometric_p();
            break;
        case WeightFamily::top_r:
            j["kind"] = "top_r";
            j["r"]    = w.top_r_count();
            break;
        case WeightFamily::custom:
            j["kind"] = "custom";
            if (w.has_exact()) {
                json vals = json::array();
                for (const auto& v : w.exact())
                    vals.push_back(numerator(v).str() + (denominator(v) == 1 ? "" : "/" + denominator(v).str()));
                j["values"] = vals;
            } else {
                j["values"] = w.values();
            }
            break;
    }
    return j;
}

// Instance schema: {"m":int,"n":int,"k":int,"costs":[[...],...],
//                   "weights":{...},"metric":bool?}; row j of costs is client j.
inline Instance instance_from_json(const json& j) {
    for (const char* key : {"m", "n", "k", "costs", "weights"})
        if (!j.contains(key)) throw InputError(std::string("instance: missing field '") + key + "'");
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    std::vector<std::vector<double>> costs;
    for (const auto& row : j.at("costs")) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(v.get<double>());
        costs.push_back(std::move(r));
    }
    std::optional<bool> metric;
    if (j.contains("metric")) metric = j.at("metric").get<bool>();
    return Instance(m, n, k, std::move(costs), weights_from_json(j.at("weights"), k), metric);
}

inline json instance_to_json(const Instance& inst) {
    json j;
    j["m"]       = inst.m;
    j["n"]       = inst.n;
    j["k"]       = inst.k;
    j["costs"]   = inst.costs;
    j["weights"] = weights_to_json(inst.weights);
    if (inst.metric_flag) j["metric"] = *inst.metric_flag;
    return j;
}

// FT schema: {"m","k","clients":[{"costs":[...],"r":int,"mult":"<decimal string>"}]}.
// Multiplicities are decimal strings because they can exceed 64 bits.
inline json ft_to_json(const reduce::FTInstance& ft) {
    json j;
    j["m"] = ft.m;
    j["k"] = ft.k;
    j["Q"] = ft.Q.str();
    json clients = json::array();
    for (const auto& c : ft.clients) {
        json cj;
        cj["costs"] = c.costs;
        cj["r"]     = c.requirement;
        cj["mult"]  = c.multiplicity.str();
        clients.push_back(std::move(cj));
    }
    j["clients"] = std::move(clients);
    return j;
}

inline reduce::FTInstance ft_from_json(const json& j) {
    reduce::FTInstance ft;
    ft.m = j.at("m").get<int>();
    ft.k = j.at("k").get<int>();
    if (j.contains("Q")) ft.Q = BigInt(j.at("Q").get<std::string>());
    for (const auto& cj : j.at("clients")) {
        reduce::FTClient c;
        for (const auto& v : cj.at("costs")) c.costs.push_back(v.get<double>());
        c.requirement  = cj.at("r").get<int>();
        c.multiplicity = BigInt(cj.at("mult").get<std::string>());
        ft.clients.push_back(std::move(c));
    }
    ft.validate();
    return ft;
}

// Tree shape: nested two-element arrays over leaf variable indices,
// e.g. [[[0,1],[2,3]],[4,5]].
inline rounding::TournamentTree tree_from_json(const json& j, int m) {
    rounding::TournamentTree t;
    auto build = [&t](auto&& self, const json& node) -> int {
        if (node.is_number_integer()) return t.add_leaf(node.get<int>());
        if (node.is_array() && node.size() == 2) {
            const int l = self(self, node[0]);
            const int r = self(self, node[1]);
            return t.add_internal(l, r);
        }
        throw InputError("tree shape: nodes must be leaf indices or two-element arrays");
    };
    t.set_root(build(build, j));
    t.finalize(m);
    return t;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

} // namespace owakm::io
