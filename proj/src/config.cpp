#include "optodicke/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "optodicke/error.hpp"
#include "optodicke/experiment.hpp"

namespace optodicke::config {

namespace {

class TomlParser {
public:
    explicit TomlParser(std::string_view s) : s_(s) {}

    json document() {
        json root = json::object();
        std::vector<std::string> table;
        for (;;) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                ++i_;
                if (peek() == '[') fail("arrays of tables are not supported");
                skip_ws();
                table = key_path();
                skip_ws();
                expect(']');
                json& t = descend(root, table);
                if (!t.is_object()) fail("key redefined as a table");
                end_of_line();
                continue;
            }
            auto path = key_path();
            skip_ws();
            expect('=');
            skip_ws();
            json v = value();
            std::vector<std::string> full = table;
            full.insert(full.end(), path.begin(), path.end());
            assign(root, full, std::move(v));
            end_of_line();
        }
        return root;
    }

    json single_value() {
        skip_ws();
        json v = value();
        skip_ws();
        if (!eof()) fail("trailing characters after value");
        return v;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
    int line_ = 1;

    bool eof() const { return i_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[i_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError("config line " + std::to_string(line_) + ": " + msg);
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++i_;
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++i_;
    }

    void skip_comment() {
        if (peek() == '#')
            while (!eof() && peek() != '\n') ++i_;
    }

    void newline() {
        if (peek() == '\r') ++i_;
        if (peek() == '\n') {
            ++i_;
            ++line_;
        }
    }

    void skip_blank_lines() {
        for (;;) {
            skip_ws();
            skip_comment();
            if (peek() == '\n' || peek() == '\r') {
                newline();
                continue;
            }
            return;
        }
    }

    void end_of_line() {
        skip_ws();
        skip_comment();
        if (eof()) return;
        if (peek() != '\n' && peek() != '\r') fail("expected end of line");
        newline();
    }

    static bool bare(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

    std::string key() {
        if (peek() == '"') return basic_string();
        if (peek() == '\'') return literal_string();
        const std::size_t start = i_;
        while (!eof() && bare(peek())) ++i_;
        if (i_ == start) fail("expected a key");
        return std::string(s_.substr(start, i_ - start));
    }

    std::vector<std::string> key_path() {
        std::vector<std::string> out{key()};
        for (;;) {
            skip_ws();
            if (peek() != '.') return out;
            ++i_;
            skip_ws();
            out.push_back(key());
        }
    }

    std::string basic_string() {
        expect('"');
        if (s_.substr(i_, 2) == "\"\"") fail("multi-line strings are not supported");
        std::string out;
        for (;;) {
            if (eof() || peek() == '\n') fail("unterminated string");
            const char c = s_[i_++];
            if (c == '"') return out;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (eof()) fail("unterminated escape");
            const char e = s_[i_++];
            switch (e) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            case 'b': out += '\b'; break;
            case 'f': out += '\f'; break;
            default: fail(std::string("unsupported escape \\") + e);
            }
        }
    }

    std::string literal_string() {
        expect('\'');
        const std::size_t start = i_;
        while (!eof() && peek() != '\'' && peek() != '\n') ++i_;
        if (peek() != '\'') fail("unterminated literal string");
        std::string out(s_.substr(start, i_ - start));
        ++i_;
        return out;
    }

    // Whitespace, newlines and comments inside arrays.
    void skip_array_space() {
        for (;;) {
            skip_ws();
            skip_comment();
            if (peek() == '\n' || peek() == '\r') {
                newline();
                continue;
            }
            return;
        }
    }

    json array() {
        expect('[');
        json out = json::array();
        for (;;) {
            skip_array_space();
            if (peek() == ']') {
                ++i_;
                return out;
            }
            out.push_back(value());
            skip_array_space();
            if (peek() == ',') {
                ++i_;
                continue;
            }
            if (peek() != ']') fail("expected ',' or ']' in array");
        }
    }

    json inline_table() {
        expect('{');
        json out = json::object();
        skip_ws();
        if (peek() == '}') {
            ++i_;
            return out;
        }
        for (;;) {
            skip_ws();
            auto path = key_path();
            skip_ws();
            expect('=');
            skip_ws();
            assign(out, path, value());
            skip_ws();
            if (peek() == ',') {
                ++i_;
                continue;
            }
            expect('}');
            return out;
        }
    }

    json number_or_bool() {
        const std::size_t start = i_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                          peek() == '.' || peek() == '_'))
            ++i_;
        std::string tok(s_.substr(start, i_ - start));
        if (tok.empty()) fail("expected a value");
        if (tok == "true") return true;
        if (tok == "false") return false;
        if (tok == "nan" || tok == "+nan" || tok == "-nan") fail("nan is not accepted");
        if (tok == "inf" || tok == "+inf" || tok == "-inf") fail("inf is not accepted");
        std::string clean;
        for (std::size_t k = 0; k < tok.size(); ++k) {
            if (tok[k] == '_') {
                if (k == 0 || k + 1 == tok.size() || !std::isdigit(static_cast<unsigned char>(tok[k - 1])) ||
                    !std::isdigit(static_cast<unsigned char>(tok[k + 1])))
                    fail("misplaced '_' in number");
                continue;
            }
            clean += tok[k];
        }
        const bool is_float = clean.find_first_of(".eE") != std::string::npos &&
                              clean.rfind("0x", 0) != 0 && clean.rfind("0b", 0) != 0 && clean.rfind("0o", 0) != 0;
        char* end = nullptr;
        if (is_float) {
            const double v = std::strtod(clean.c_str(), &end);
            if (end != clean.c_str() + clean.size()) fail("malformed number '" + tok + "'");
            return v;
        }
        int base = 10;
        std::string digits = clean;
        if (clean.rfind("0x", 0) == 0) base = 16;
        if (clean.rfind("0o", 0) == 0) base = 8;
        if (clean.rfind("0b", 0) == 0) base = 2;
        if (base != 10) digits = clean.substr(2);
        errno = 0;
        const long long v = std::strtoll(digits.c_str(), &end, base);
        if (digits.empty() || end != digits.c_str() + digits.size() || errno == ERANGE)
            fail("malformed number '" + tok + "'");
        return static_cast<std::int64_t>(v);
    }

    json value() {
        switch (peek()) {
        case '"': return basic_string();
        case '\'': return literal_string();
        case '[': return array();
        case '{': return inline_table();
        default: return number_or_bool();
        }
    }

    json& descend(json& root, const std::vector<std::string>& path) {
        json* cur = &root;
        for (const auto& k : path) {
            if (!cur->is_object()) fail("key '" + k + "' is not a table");
            if (!cur->contains(k)) (*cur)[k] = json::object();
            cur = &(*cur)[k];
        }
        return *cur;
    }

    void assign(json& root, const std::vector<std::string>& path, json v) {
        std::vector<std::string> parent(path.begin(), path.end() - 1);
        json& t = descend(root, parent);
        if (!t.is_object()) fail("cannot assign into a non-table");
        if (t.contains(path.back())) fail("duplicate key '" + path.back() + "'");
        t[path.back()] = std::move(v);
    }
};

const json* find_table(const json& root, std::string_view table) {
    if (table.empty()) return &root;
    const std::string k(table);
    if (!root.is_object() || !root.contains(k)) return nullptr;
    const json& t = root.at(k);
    if (!t.is_object()) throw ValidationError("'" + k + "' must be a table");
    return &t;
}

const json* find_key(const json& root, std::string_view table, std::string_view key) {
    const json* t = find_table(root, table);
    if (!t) return nullptr;
    const std::string k(key);
    return t->contains(k) ? &t->at(k) : nullptr;
}

std::string where(std::string_view table, std::string_view key) {
    return table.empty() ? std::string(key) : std::string(table) + "." + std::string(key);
}

double as_number(const json& v, const std::string& name) {
    if (!v.is_number()) throw ValidationError("'" + name + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError("'" + name + "' must be finite");
    return d;
}

} // namespace

json parse_toml(std::string_view text) { return TomlParser(text).document(); }

json parse_toml_value(std::string_view text) { return TomlParser(text).single_value(); }

json load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (path.extension() == ".json") {
        try {
            json j = json::parse(text);
            if (!j.is_object()) throw ValidationError("JSON config must be an object");
            return j;
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("malformed JSON config: ") + e.what());
        }
    }
    return parse_toml(text);
}

void apply_override(json& root, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ValidationError("override must look like table.key=value");
    std::string path(assignment.substr(0, eq));
    const json v = parse_toml_value(assignment.substr(eq + 1));
    json* cur = &root;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string k = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (k.empty()) throw ValidationError("empty key in override '" + path + "'");
        if (dot == std::string::npos) {
            (*cur)[k] = v;
            return;
        }
        if (!cur->contains(k)) (*cur)[k] = json::object();
        cur = &(*cur)[k];
        if (!cur->is_object()) throw ValidationError("override path '" + path + "' crosses a non-table");
        start = dot + 1;
    }
}

void check_keys(const json& root, std::string_view table, const std::vector<std::string>& allowed) {
    const json* t = find_table(root, table);
    if (!t) return;
    for (const auto& [k, v] : t->items()) {
        bool ok = false;
        for (const auto& a : allowed) ok = ok || a == k;
        if (!ok) throw ValidationError("unknown key '" + where(table, k) + "'");
    }
}

DimensionlessParams dimensionless_from(const json& table) {
    json root = json::object();
    root["dimensionless"] = table;
    check_keys(root, "dimensionless", {"g", "kappa", "eta", "eta_a", "eta_b", "lambda", "mu", "V", "delta", "gamma"});
    DimensionlessParams p;
    auto num = [&](const char* k, double& dst) {
        if (table.contains(k)) dst = as_number(table.at(k), std::string("dimensionless.") + k);
    };
    num("g", p.g);
    num("kappa", p.kappa);
    num("eta_a", p.eta_a);
    num("eta_b", p.eta_b);
    num("lambda", p.lambda);
    num("V", p.V);
    num("delta", p.delta);
    num("gamma", p.gamma);
    if (table.contains("eta")) {
        if (table.contains("eta_a") || table.contains("eta_b"))
            throw ValidationError("give either dimensionless.eta or eta_a/eta_b, not both");
        const double eta = as_number(table.at("eta"), "dimensionless.eta");
        p.eta_a = eta;
        p.eta_b = -eta;
    }
    p.validate();
    if (table.contains("mu")) {
        if (table.contains("lambda")) throw ValidationError("give either dimensionless.mu or lambda, not both");
        p = at_mu(p, as_number(table.at("mu"), "dimensionless.mu"));
    }
    return p;
}

PhysicalParams physical_from(const json& table, double* g, double* kappa, std::optional<double>* P_over_Pc) {
    json root = json::object();
    root["physical"] = table;
    check_keys(root, "physical",
               {"L", "m", "omega", "omega_centre", "R_membrane", "P", "Q", "V", "g", "kappa", "P_over_Pc"});
    PhysicalParams p;
    auto num = [&](const char* k, double& dst) {
        if (table.contains(k)) dst = as_number(table.at(k), std::string("physical.") + k);
    };
    num("L", p.L);
    num("m", p.m);
    num("omega", p.omega);
    num("omega_centre", p.omega_centre);
    num("R_membrane", p.R_membrane);
    num("P", p.P);
    num("Q", p.Q);
    num("V", p.V);
    p.validate();
    double gv = coupling_from_reflectivity(p);
    double kv = p.omega;
    num("g", gv);
    num("kappa", kv);
    require(gv > 0.0 && kv > 0.0, "physical.g and physical.kappa must be > 0");
    std::optional<double> ratio;
    if (table.contains("P_over_Pc")) {
        if (table.contains("P")) throw ValidationError("give either physical.P or physical.P_over_Pc, not both");
        ratio = as_number(table.at("P_over_Pc"), "physical.P_over_Pc");
        require(*ratio > 0.0, "physical.P_over_Pc must be > 0");
        p.P = *ratio * critical_power(p, gv, kv);
    }
    if (g) *g = gv;
    if (kappa) *kappa = kv;
    if (P_over_Pc) *P_over_Pc = ratio;
    return p;
}

DimensionlessParams ParameterSet::as_dimensionless() const {
    if (kind == Kind::dimensionless) return dimensionless;
    return experiment::to_dimensionless(physical, g, kappa);
}

ParameterSet parameters_from(const json& root) {
    if (!root.is_object()) throw ValidationError("config must be a table");
    for (const auto& [k, v] : root.items())
        if (!v.is_object()) throw ValidationError("unexpected top-level key '" + k + "'");
    const bool has_d = root.contains("dimensionless");
    const bool has_p = root.contains("physical");
    if (has_d && has_p) throw ValidationError("exactly one of [dimensionless] or [physical] may be given");
    ParameterSet s;
    if (has_p) {
        s.kind = ParameterSet::Kind::physical;
        s.physical = physical_from(root.at("physical"), &s.g, &s.kappa, &s.P_over_Pc);
        s.dimensionless = s.as_dimensionless();
        return s;
    }
    s.dimensionless = dimensionless_from(has_d ? root.at("dimensionless") : json::object());
    return s;
}

double get_number(const json& root, std::string_view table, std::string_view key, double fallback) {
    const json* v = find_key(root, table, key);
    return v ? as_number(*v, where(table, key)) : fallback;
}

long get_integer(const json& root, std::string_view table, std::string_view key, long fallback) {
    const json* v = find_key(root, table, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ValidationError("'" + where(table, key) + "' must be an integer");
    return v->get<long>();
}

bool get_bool(const json& root, std::string_view table, std::string_view key, bool fallback) {
    const json* v = find_key(root, table, key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ValidationError("'" + where(table, key) + "' must be a boolean");
    return v->get<bool>();
}

std::string get_string(const json& root, std::string_view table, std::string_view key, std::string fallback) {
    const json* v = find_key(root, table, key);
    if (!v) return fallback;
    if (!v->is_string()) throw ValidationError("'" + where(table, key) + "' must be a string");
    return v->get<std::string>();
}

std::vector<double> get_numbers(const json& root, std::string_view table, std::string_view key,
                                std::vector<double> fallback) {
    const json* v = find_key(root, table, key);
    if (!v) return fallback;
    if (v->is_number()) return {as_number(*v, where(table, key))};
    if (!v->is_array()) throw ValidationError("'" + where(table, key) + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) out.push_back(as_number(e, where(table, key)));
    return out;
}

} // namespace optodicke::config
