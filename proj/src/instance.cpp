#include "rrm/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rrm::instance {

using nlohmann::json;

double PriceGrid::lp(int alt, int cust) const {
    if (alt == 0) return 0.0;
    auto it = lp_override.find({alt, cust});
    return it == lp_override.end() ? lp_default : it->second;
}

double PriceGrid::mp(int alt, int cust) const {
    if (alt == 0) return 0.0;
    auto it = mp_override.find({alt, cust});
    return it == mp_override.end() ? mp_default : it->second;
}

const Alternative* Instance::alternative(int id) const {
    for (const auto& a : alternatives)
        if (a.id == id) return &a;
    return nullptr;
}

std::vector<int> Instance::priority_order() const {
    std::vector<int> order(customers.size());
    for (std::size_t k = 0; k < customers.size(); ++k) order[k] = static_cast<int>(k);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return customers[a].priority_rank < customers[b].priority_rank;
    });
    return order;
}

std::vector<int> Instance::feasible_levels(int alt, int cust) const {
    std::vector<int> out;
    if (alt == 0) return out;
    double lo = price.lp(alt, cust), hi = price.mp(alt, cust);
    for (int l : price.levels)
        if (lo + l * price.pm <= hi + 1e-12) out.push_back(l);
    return out;
}

std::vector<std::string> Instance::attribute_names() const {
    std::set<std::string> names;
    for (const auto& a : alternatives)
        for (const auto& [k, v] : a.attributes) names.insert(k);
    return {names.begin(), names.end()};
}

std::vector<Violation> validate(const Instance& inst) {
    std::vector<Violation> out;
    auto add = [&](std::string code, std::string msg) {
        out.push_back({std::move(code), std::move(msg)});
    };

    int optout_count = 0;
    std::set<int> alt_ids;
    for (const auto& a : inst.alternatives) {
        if (!alt_ids.insert(a.id).second)
            add("duplicate-alternative", "alternative id " + std::to_string(a.id) + " repeated");
        if (a.id == 0) {
            ++optout_count;
            if (a.capacity)
                add("opt-out-capacitated", "opt-out must have unbounded capacity");
        }
        if (a.capacity && *a.capacity < 0)
            add("negative-capacity",
                "alternative " + std::to_string(a.id) + " has negative capacity");
    }
    if (optout_count == 0) add("missing-opt-out", "no alternative with id 0");

    std::set<int> ranks;
    std::set<int> cust_ids;
    for (const auto& c : inst.customers) {
        if (!cust_ids.insert(c.id).second)
            add("duplicate-customer", "customer id " + std::to_string(c.id) + " repeated");
        ranks.insert(c.priority_rank);
        bool has_optout = false;
        for (int a : c.choice_set) {
            if (a == 0) has_optout = true;
            if (!alt_ids.count(a))
                add("unknown-choice",
                    "customer " + std::to_string(c.id) + " references alternative " +
                        std::to_string(a));
        }
        if (!has_optout)
            add("choice-set-missing-opt-out",
                "customer " + std::to_string(c.id) + " choice set lacks the opt-out");
    }
    if (!inst.customers.empty()) {
        bool perm = ranks.size() == inst.customers.size() &&
                    *ranks.begin() == 1 &&
                    *ranks.rbegin() == static_cast<int>(inst.customers.size());
        if (!perm)
            add("priority-not-permutation",
                "priority ranks must be a permutation of 1.." +
                    std::to_string(inst.customers.size()));
    }

    if (inst.scenario_count < 1) add("bad-scenario-count", "scenario count must be >= 1");
    if (inst.price.pm <= 0.0) add("bad-price-multiplier", "pm must be positive");
    for (int l : inst.price.levels)
        if (l <= 0) add("bad-price-level", "level indices must be positive");

    for (const auto& a : inst.alternatives) {
        if (a.id == 0) continue;
        for (const auto& c : inst.customers) {
            double lo = inst.price.lp(a.id, c.id), hi = inst.price.mp(a.id, c.id);
            if (lo < 0.0)
                add("negative-price-bound", "lp(" + std::to_string(a.id) + "," +
                                                std::to_string(c.id) + ") < 0");
            if (lo > hi)
                add("price-bounds-inverted", "lp > mp at (" + std::to_string(a.id) + "," +
                                                 std::to_string(c.id) + ")");
        }
    }
    return out;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

std::string pair_key(int alt, int cust) {
    return std::to_string(alt) + "," + std::to_string(cust);
}

void write_bound_map(std::ostringstream& out, double def,
                     const std::map<std::pair<int, int>, double>& over) {
    out << "{\"default\": " << fmt17(def);
    for (const auto& [key, v] : over)
        out << ", " << quote(pair_key(key.first, key.second)) << ": " << fmt17(v);
    out << "}";
}

std::pair<int, int> parse_pair_key(const std::string& key) {
    auto comma = key.find(',');
    if (comma == std::string::npos)
        throw ParseError("price bound key '" + key + "' is not of the form \"alt,customer\"");
    return {std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1))};
}

const json& require(const json& obj, const char* field, const char* where) {
    auto it = obj.find(field);
    if (it == obj.end())
        throw ParseError(std::string("missing field \"") + field + "\" in " + where);
    return *it;
}

}  // namespace

std::string save(const Instance& inst) {
    std::ostringstream out;
    out << "{\n";

    out << "  \"alternatives\": [\n";
    for (std::size_t k = 0; k < inst.alternatives.size(); ++k) {
        const auto& a = inst.alternatives[k];
        out << "    {\"attributes\": {";
        bool first = true;
        for (const auto& [name, v] : a.attributes) {
            if (!first) out << ", ";
            first = false;
            out << quote(name) << ": " << fmt17(v);
        }
        out << "}, \"capacity\": ";
        if (a.capacity)
            out << *a.capacity;
        else
            out << "null";
        out << ", \"id\": " << a.id << "}";
        out << (k + 1 < inst.alternatives.size() ? ",\n" : "\n");
    }
    out << "  ],\n";

    out << "  \"customers\": [\n";
    for (std::size_t k = 0; k < inst.customers.size(); ++k) {
        const auto& c = inst.customers[k];
        out << "    {\"beta_attrs\": {";
        bool first = true;
        for (const auto& [name, v] : c.beta_attrs) {
            if (!first) out << ", ";
            first = false;
            out << quote(name) << ": " << fmt17(v);
        }
        out << "}, \"beta_price\": " << fmt17(c.beta_price) << ", \"choice_set\": [";
        for (std::size_t j = 0; j < c.choice_set.size(); ++j)
            out << (j ? ", " : "") << c.choice_set[j];
        out << "], \"id\": " << c.id << ", \"priority_rank\": " << c.priority_rank << "}";
        out << (k + 1 < inst.customers.size() ? ",\n" : "\n");
    }
    out << "  ],\n";

    out << "  \"price\": {\"levels\": [";
    for (std::size_t j = 0; j < inst.price.levels.size(); ++j)
        out << (j ? ", " : "") << inst.price.levels[j];
    out << "], \"lp\": ";
    write_bound_map(out, inst.price.lp_default, inst.price.lp_override);
    out << ", \"mp\": ";
    write_bound_map(out, inst.price.mp_default, inst.price.mp_override);
    out << ", \"pm\": " << fmt17(inst.price.pm) << "},\n";

    out << "  \"scenarios\": {\"count\": " << inst.scenario_count
        << ", \"positive_draws_only\": " << (inst.positive_draws_only ? "true" : "false")
        << ", \"seed\": " << inst.seed << "}\n";
    out << "}\n";
    return out.str();
}

Instance load(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }

    Instance inst;
    for (const auto& ja : require(doc, "alternatives", "instance")) {
        Alternative a;
        a.id = require(ja, "id", "alternative").get<int>();
        const auto& cap = require(ja, "capacity", "alternative");
        if (!cap.is_null()) a.capacity = cap.get<long>();
        for (const auto& [name, v] : require(ja, "attributes", "alternative").items())
            a.attributes[name] = v.get<double>();
        inst.alternatives.push_back(std::move(a));
    }
    for (const auto& jc : require(doc, "customers", "instance")) {
        Customer c;
        c.id = require(jc, "id", "customer").get<int>();
        c.priority_rank = require(jc, "priority_rank", "customer").get<int>();
        c.beta_price = require(jc, "beta_price", "customer").get<double>();
        for (const auto& [name, v] : require(jc, "beta_attrs", "customer").items())
            c.beta_attrs[name] = v.get<double>();
        for (const auto& v : require(jc, "choice_set", "customer"))
            c.choice_set.push_back(v.get<int>());
        inst.customers.push_back(std::move(c));
    }

    const auto& jp = require(doc, "price", "instance");
    inst.price.pm = require(jp, "pm", "price").get<double>();
    for (const auto& v : require(jp, "levels", "price"))
        inst.price.levels.push_back(v.get<int>());
    auto read_bounds = [&](const char* field, double& def,
                           std::map<std::pair<int, int>, double>& over) {
        const auto& jb = require(jp, field, "price");
        if (jb.is_number()) {
            def = jb.get<double>();
            return;
        }
        for (const auto& [key, v] : jb.items()) {
            if (key == "default")
                def = v.get<double>();
            else
                over[parse_pair_key(key)] = v.get<double>();
        }
    };
    read_bounds("lp", inst.price.lp_default, inst.price.lp_override);
    read_bounds("mp", inst.price.mp_default, inst.price.mp_override);

    const auto& js = require(doc, "scenarios", "instance");
    inst.scenario_count = require(js, "count", "scenarios").get<int>();
    inst.seed = require(js, "seed", "scenarios").get<std::uint64_t>();
    inst.positive_draws_only = require(js, "positive_draws_only", "scenarios").get<bool>();
    return inst;
}

std::uint64_t digest(const Instance& inst) {
    std::string text = save(inst);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

Instance synth_instance(int n_customers,
                        std::optional<std::pair<long, long>> capacities,
                        std::uint64_t seed) {
    if (n_customers < 1) throw std::invalid_argument("n_customers must be >= 1");
    Instance inst;
    inst.seed = seed;
    inst.scenario_count = 4;
    inst.positive_draws_only = true;

    Alternative optout;
    optout.id = 0;
    inst.alternatives.push_back(optout);
    for (int id = 1; id <= 2; ++id) {
        Alternative a;
        a.id = id;
        if (capacities) a.capacity = id == 1 ? capacities->first : capacities->second;
        inst.alternatives.push_back(std::move(a));
    }

    for (int k = 0; k < n_customers; ++k) {
        Customer c;
        c.id = k + 1;
        c.priority_rank = k + 1;
        c.beta_price = -1.0;
        c.choice_set = {0, 1, 2};
        inst.customers.push_back(std::move(c));
    }

    // Grid 1.0 + l*0.5 with the no-level state included: prices {1.0, 1.5, ..., 4.5}.
    inst.price.pm = 0.5;
    inst.price.levels = {1, 2, 3, 4, 5, 6, 7};
    inst.price.lp_default = 1.0;
    inst.price.mp_default = 4.5;
    return inst;
}

}  // namespace rrm::instance
