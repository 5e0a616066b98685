#include "rrm/milp.hpp"

#include <array>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace rrm::milp {

namespace {

struct RoleSpec {
    Tag::Role role;
    const char* prefix;
    int arity;
};

// Index order per role follows the declaration order in Tag.
constexpr std::array<RoleSpec, 12> kRoles = {{
    {Tag::Role::YOffer, "y", 2},
    {Tag::Role::YAvail, "ya", 3},
    {Tag::Role::RR, "RR", 4},
    {Tag::Role::RAlt, "Ra", 3},
    {Tag::Role::RCust, "Rc", 2},
    {Tag::Role::B, "b", 4},
    {Tag::Role::Z, "z", 4},
    {Tag::Role::W, "w", 3},
    {Tag::Role::Lambda, "lam", 3},
    {Tag::Role::Alpha, "al", 4},
    {Tag::Role::U, "u", 3},
    {Tag::Role::UMax, "umax", 2},
}};

std::vector<int> tag_indices(const Tag& t) {
    switch (t.role) {
        case Tag::Role::YOffer: return {t.i, t.n};
        case Tag::Role::YAvail: return {t.i, t.n, t.r};
        case Tag::Role::RR: return {t.i, t.j, t.n, t.r};
        case Tag::Role::RAlt: return {t.i, t.n, t.r};
        case Tag::Role::RCust: return {t.n, t.r};
        case Tag::Role::B: return {t.i, t.j, t.n, t.r};
        case Tag::Role::Z: return {t.i, t.j, t.n, t.r};
        case Tag::Role::W: return {t.i, t.n, t.r};
        case Tag::Role::Lambda: return {t.i, t.n, t.l};
        case Tag::Role::Alpha: return {t.i, t.n, t.r, t.l};
        case Tag::Role::U: return {t.i, t.n, t.r};
        case Tag::Role::UMax: return {t.n, t.r};
        case Tag::Role::Other: return {};
    }
    return {};
}

void assign_indices(Tag& t, const std::vector<int>& idx) {
    auto at = [&](std::size_t k) { return k < idx.size() ? idx[k] : -1; };
    switch (t.role) {
        case Tag::Role::YOffer: t.i = at(0); t.n = at(1); break;
        case Tag::Role::YAvail: t.i = at(0); t.n = at(1); t.r = at(2); break;
        case Tag::Role::RR:
        case Tag::Role::B:
        case Tag::Role::Z: t.i = at(0); t.j = at(1); t.n = at(2); t.r = at(3); break;
        case Tag::Role::RAlt:
        case Tag::Role::W:
        case Tag::Role::U: t.i = at(0); t.n = at(1); t.r = at(2); break;
        case Tag::Role::RCust:
        case Tag::Role::UMax: t.n = at(0); t.r = at(1); break;
        case Tag::Role::Lambda: t.i = at(0); t.n = at(1); t.l = at(2); break;
        case Tag::Role::Alpha: t.i = at(0); t.n = at(1); t.r = at(2); t.l = at(3); break;
        case Tag::Role::Other: break;
    }
}

// Shortest decimal that round-trips.
std::string fmt_real(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = std::strtod(buf, nullptr);
    if (back == v) {
        char shorter[40];
        for (int prec = 1; prec < 17; ++prec) {
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
            if (std::strtod(shorter, nullptr) == v) return shorter;
        }
    }
    return buf;
}

}  // namespace

std::string Tag::name() const {
    if (role == Role::Other) return other_name;
    std::string out;
    for (const auto& spec : kRoles) {
        if (spec.role == role) {
            out = spec.prefix;
            break;
        }
    }
    for (int v : tag_indices(*this)) {
        out += '_';
        out += std::to_string(v);
    }
    return out;
}

std::optional<Tag> Tag::parse(const std::string& name) {
    auto underscore = name.find('_');
    std::string prefix = name.substr(0, underscore);
    for (const auto& spec : kRoles) {
        if (prefix != spec.prefix) continue;
        std::vector<int> idx;
        std::size_t pos = underscore;
        while (pos != std::string::npos && pos < name.size()) {
            std::size_t next = name.find('_', pos + 1);
            std::string tok = name.substr(pos + 1, next == std::string::npos
                                                        ? std::string::npos
                                                        : next - pos - 1);
            int value = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || p != tok.data() + tok.size()) return std::nullopt;
            idx.push_back(value);
            pos = next;
        }
        if (static_cast<int>(idx.size()) != spec.arity) return std::nullopt;
        Tag t;
        t.role = spec.role;
        assign_indices(t, idx);
        return t;
    }
    return std::nullopt;
}

int MilpModel::add_var(VarKind kind, double lower, double upper, Tag tag) {
    VarRef v;
    v.id = static_cast<int>(variables.size());
    v.kind = kind;
    v.lower = lower;
    v.upper = upper;
    v.tag = std::move(tag);
    variables.push_back(std::move(v));
    return variables.back().id;
}

void MilpModel::add_constraint(LinConstraint c) { constraints.push_back(std::move(c)); }

int MilpModel::find(const Tag& tag) const {
    for (const auto& v : variables)
        if (v.tag == tag) return v.id;
    return -1;
}

double MilpModel::objective_value(const std::vector<double>& x) const {
    double obj = 0.0;
    for (auto [id, coef] : objective) obj += coef * x[id];
    return obj;
}

ModelCounts model_counts(const MilpModel& model) {
    ModelCounts c;
    c.n_vars = model.variables.size();
    c.n_constraints = model.constraints.size();
    for (const auto& v : model.variables)
        if (v.kind == VarKind::Binary) ++c.n_binaries;
    return c;
}

std::string export_mps(const MilpModel& model) {
    std::ostringstream out;
    out << "NAME model\n";
    out << "OBJSENSE\n MAX\n";
    out << "ROWS\n";
    out << " N obj\n";
    auto row_name = [](const LinConstraint& c, std::size_t idx) {
        std::string n = c.label.empty() ? "c" + std::to_string(idx) : c.label;
        if (n.size() > 255) n.resize(255);
        return n;
    };
    for (std::size_t k = 0; k < model.constraints.size(); ++k) {
        const auto& c = model.constraints[k];
        char s = c.sense == Sense::Le ? 'L' : (c.sense == Sense::Eq ? 'E' : 'G');
        out << ' ' << s << ' ' << row_name(c, k) << '\n';
    }

    // Column-major entries, variables ordered by id, rows by insertion order.
    std::vector<std::vector<std::pair<std::string, double>>> cols(model.variables.size());
    for (auto [id, coef] : model.objective) cols[id].emplace_back("obj", coef);
    for (std::size_t k = 0; k < model.constraints.size(); ++k) {
        const auto& c = model.constraints[k];
        for (auto [id, coef] : c.terms) cols[id].emplace_back(row_name(c, k), coef);
    }
    out << "COLUMNS\n";
    for (const auto& v : model.variables) {
        for (const auto& [row, coef] : cols[v.id])
            out << "    " << v.tag.name() << ' ' << row << ' ' << fmt_real(coef) << '\n';
    }
    out << "RHS\n";
    for (std::size_t k = 0; k < model.constraints.size(); ++k) {
        const auto& c = model.constraints[k];
        if (c.rhs != 0.0)
            out << "    rhs " << row_name(c, k) << ' ' << fmt_real(c.rhs) << '\n';
    }
    out << "BOUNDS\n";
    for (const auto& v : model.variables) {
        const std::string name = v.tag.name();
        if (v.kind == VarKind::Binary) {
            out << " BV bnd " << name << '\n';
            // presolve may tighten a binary's box; BV alone would lose that
            if (v.lower == v.upper) {
                out << " FX bnd " << name << ' ' << fmt_real(v.lower) << '\n';
            } else {
                if (v.lower != 0.0) out << " LO bnd " << name << ' ' << fmt_real(v.lower) << '\n';
                if (v.upper != 1.0) out << " UP bnd " << name << ' ' << fmt_real(v.upper) << '\n';
            }
            continue;
        }
        bool lo_inf = v.lower == -kInf;
        bool up_inf = v.upper == kInf;
        if (lo_inf && up_inf) {
            out << " FR bnd " << name << '\n';
        } else if (lo_inf) {
            out << " MI bnd " << name << '\n';
            out << " UP bnd " << name << ' ' << fmt_real(v.upper) << '\n';
        } else if (up_inf) {
            out << " LO bnd " << name << ' ' << fmt_real(v.lower) << '\n';
        } else if (v.lower == v.upper) {
            out << " FX bnd " << name << ' ' << fmt_real(v.lower) << '\n';
        } else {
            out << " LO bnd " << name << ' ' << fmt_real(v.lower) << '\n';
            out << " UP bnd " << name << ' ' << fmt_real(v.upper) << '\n';
        }
    }
    out << "ENDATA\n";
    return out.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

double parse_real(const std::string& tok, int lineno) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
        throw MpsParseError("line " + std::to_string(lineno) + ": bad number '" + tok + "'");
    return v;
}

}  // namespace

MilpModel import_mps(const std::string& text) {
    MilpModel model;
    std::map<std::string, int> row_of;      // constraint rows
    std::map<std::string, int> col_of;
    std::string obj_row;
    bool maximize = false;

    enum Section { None, ObjSense, Rows, Columns, Rhs, Ranges, Bounds, Done };
    Section section = None;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool in_integer_block = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '*') continue;
        bool header = !std::isspace(static_cast<unsigned char>(line[0]));
        auto toks = split_ws(line);
        if (toks.empty()) continue;

        if (header) {
            const std::string& kw = toks[0];
            if (kw == "NAME") continue;
            if (kw == "OBJSENSE") {
                section = ObjSense;
                if (toks.size() > 1) {
                    maximize = toks[1] == "MAX" || toks[1] == "MAXIMIZE";
                    section = None;
                }
            } else if (kw == "ROWS") {
                section = Rows;
            } else if (kw == "COLUMNS") {
                section = Columns;
            } else if (kw == "RHS") {
                section = Rhs;
            } else if (kw == "RANGES") {
                section = Ranges;
            } else if (kw == "BOUNDS") {
                section = Bounds;
            } else if (kw == "ENDATA") {
                section = Done;
                break;
            } else {
                throw MpsParseError("line " + std::to_string(lineno) +
                                    ": unknown section '" + kw + "'");
            }
            continue;
        }

        switch (section) {
            case ObjSense:
                maximize = toks[0] == "MAX" || toks[0] == "MAXIMIZE";
                section = None;
                break;
            case Rows: {
                if (toks.size() != 2)
                    throw MpsParseError("line " + std::to_string(lineno) + ": bad ROWS entry");
                const std::string& type = toks[0];
                const std::string& name = toks[1];
                if (type == "N") {
                    if (obj_row.empty()) obj_row = name;
                } else {
                    LinConstraint c;
                    c.sense = type == "L" ? Sense::Le : (type == "E" ? Sense::Eq : Sense::Ge);
                    if (type != "L" && type != "E" && type != "G")
                        throw MpsParseError("line " + std::to_string(lineno) +
                                            ": bad row type '" + type + "'");
                    c.label = name;
                    row_of[name] = static_cast<int>(model.constraints.size());
                    model.constraints.push_back(std::move(c));
                }
                break;
            }
            case Columns: {
                if (toks.size() >= 3 && toks[1] == "'MARKER'") {
                    in_integer_block = toks[2] == "'INTORG'";
                    break;
                }
                if (toks.size() != 3 && toks.size() != 5)
                    throw MpsParseError("line " + std::to_string(lineno) + ": bad COLUMNS entry");
                const std::string& col = toks[0];
                auto it = col_of.find(col);
                int id;
                if (it == col_of.end()) {
                    Tag tag;
                    if (auto parsed = Tag::parse(col)) {
                        tag = *parsed;
                    } else {
                        tag.role = Tag::Role::Other;
                        tag.other_name = col;
                    }
                    id = model.add_var(in_integer_block ? VarKind::Binary : VarKind::Continuous,
                                       in_integer_block ? 0.0 : -kInf,
                                       in_integer_block ? 1.0 : kInf, tag);
                    if (!in_integer_block) {
                        // default MPS continuous bounds
                        model.variables[id].lower = 0.0;
                        model.variables[id].upper = kInf;
                    }
                    col_of[col] = id;
                } else {
                    id = it->second;
                }
                for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
                    const std::string& row = toks[k];
                    double coef = parse_real(toks[k + 1], lineno);
                    if (row == obj_row) {
                        model.add_objective(id, coef);
                    } else {
                        auto rit = row_of.find(row);
                        if (rit == row_of.end())
                            throw MpsParseError("line " + std::to_string(lineno) +
                                                ": unknown row '" + row + "'");
                        model.constraints[rit->second].terms.emplace_back(id, coef);
                    }
                }
                break;
            }
            case Rhs: {
                for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
                    auto rit = row_of.find(toks[k]);
                    if (rit == row_of.end())
                        throw MpsParseError("line " + std::to_string(lineno) +
                                            ": unknown row '" + toks[k] + "'");
                    model.constraints[rit->second].rhs = parse_real(toks[k + 1], lineno);
                }
                break;
            }
            case Ranges:
                throw MpsParseError("line " + std::to_string(lineno) +
                                    ": RANGES entries are not supported");
            case Bounds: {
                if (toks.size() < 3)
                    throw MpsParseError("line " + std::to_string(lineno) + ": bad BOUNDS entry");
                const std::string& type = toks[0];
                auto cit = col_of.find(toks[2]);
                if (cit == col_of.end())
                    throw MpsParseError("line " + std::to_string(lineno) +
                                        ": unknown column '" + toks[2] + "'");
                VarRef& v = model.variables[cit->second];
                double val = toks.size() > 3 ? parse_real(toks[3], lineno) : 0.0;
                if (type == "BV") {
                    v.kind = VarKind::Binary;
                    v.lower = 0.0;
                    v.upper = 1.0;
                } else if (type == "UP") {
                    v.upper = val;
                } else if (type == "LO") {
                    v.lower = val;
                } else if (type == "FX") {
                    v.lower = v.upper = val;
                } else if (type == "FR") {
                    v.lower = -kInf;
                    v.upper = kInf;
                } else if (type == "MI") {
                    v.lower = -kInf;
                } else if (type == "PL") {
                    v.upper = kInf;
                } else {
                    throw MpsParseError("line " + std::to_string(lineno) +
                                        ": bad bound type '" + type + "'");
                }
                break;
            }
            case None:
            case Done:
                throw MpsParseError("line " + std::to_string(lineno) + ": data outside a section");
        }
    }
    if (!maximize) {
        // Stored natively as maximization; flip a minimization objective.
        for (auto& [id, coef] : model.objective) coef = -coef;
    }
    return model;
}

}  // namespace rrm::milp
