#include "bbfs/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bbfs {

double ConfigValue::number() const {
    if (is_number()) return std::get<double>(v);
    if (is_string()) {  // "inf" etc.
        const std::string& s = std::get<std::string>(v);
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        try {
            return std::stod(s);
        } catch (...) {
        }
    }
    throw ConfigValidationError("config value is not a number");
}

const std::string& ConfigValue::str() const {
    if (!is_string()) throw ConfigValidationError("config value is not a string");
    return std::get<std::string>(v);
}

const std::vector<ConfigValue>& ConfigValue::list() const {
    if (!is_list()) throw ConfigValidationError("config value is not a list");
    return std::get<std::vector<ConfigValue>>(v);
}

const ConfigNode& ConfigValue::block() const {
    if (!is_block()) throw ConfigValidationError("config value is not a block");
    return *std::get<std::shared_ptr<ConfigNode>>(v);
}

bool ConfigNode::has(const std::string& key) const { return find(key) != nullptr; }

const ConfigValue* ConfigNode::find(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

const ConfigValue& ConfigNode::at(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v) throw ConfigValidationError("missing config key '" + key + "'");
    return *v;
}

double ConfigNode::number_or(const std::string& key, double fallback) const {
    const ConfigValue* v = find(key);
    return v ? v->number() : fallback;
}

std::string ConfigNode::string_or(const std::string& key,
                                  const std::string& fallback) const {
    const ConfigValue* v = find(key);
    return v ? v->str() : fallback;
}

bool ConfigNode::bool_or(const std::string& key, bool fallback) const {
    const ConfigValue* v = find(key);
    if (!v) return fallback;
    if (v->is_number()) return v->number() != 0.0;
    const std::string& s = v->str();
    if (s == "true" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "no" || s == "off") return false;
    throw ConfigValidationError("config key '" + key + "' is not a boolean");
}

const ConfigNode* ConfigNode::block_or_null(const std::string& key) const {
    const ConfigValue* v = find(key);
    return v && v->is_block() ? &v->block() : nullptr;
}

void ConfigNode::set_number(const std::string& key, double v) {
    entries.emplace_back(key, ConfigValue{v});
}

void ConfigNode::set_string(const std::string& key, const std::string& v) {
    entries.emplace_back(key, ConfigValue{v});
}

ConfigNode& ConfigNode::add_block(const std::string& key) {
    auto node = std::make_shared<ConfigNode>();
    entries.emplace_back(key, ConfigValue{node});
    return *node;
}

// ---- parser -----------------------------------------------------------------

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    int line = 1;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigParseError("config parse error at line " + std::to_string(line) +
                               ": " + what);
    }

    void skip_ws() {
        while (pos < s.size()) {
            char c = s[pos];
            if (c == '\n') {
                ++line;
                ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else if (c == '#') {
                while (pos < s.size() && s[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    bool consume(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    static bool word_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
               c == '.' || c == '+' || c == ':' || c == '/';
    }

    std::string word() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        if (s[pos] == '"') {
            ++pos;
            std::string out;
            while (pos < s.size() && s[pos] != '"') {
                if (s[pos] == '\n') fail("newline inside quoted string");
                out.push_back(s[pos++]);
            }
            if (pos >= s.size()) fail("unterminated string");
            ++pos;
            return out;
        }
        std::size_t start = pos;
        while (pos < s.size() && word_char(s[pos])) ++pos;
        if (pos == start) fail(std::string("unexpected character '") + s[pos] + "'");
        return s.substr(start, pos - start);
    }

    ConfigValue value() {
        skip_ws();
        if (pos >= s.size()) fail("expected a value");
        if (s[pos] == '[') {
            ++pos;
            std::vector<ConfigValue> items;
            if (!consume(']')) {
                items.push_back(value());
                while (consume(',')) items.push_back(value());
                if (!consume(']')) fail("expected ']'");
            }
            return ConfigValue{std::move(items)};
        }
        if (s[pos] == '{') return ConfigValue{std::make_shared<ConfigNode>(block())};
        std::string w = word();
        // numbers parse fully, everything else stays a string
        if (!w.empty() &&
            (std::isdigit(static_cast<unsigned char>(w[0])) || w[0] == '-' ||
             w[0] == '+' || w[0] == '.')) {
            char* end = nullptr;
            double d = std::strtod(w.c_str(), &end);
            if (end && *end == '\0') return ConfigValue{d};
        }
        return ConfigValue{std::move(w)};
    }

    ConfigNode block() {
        ConfigNode node;
        bool braced = consume('{');
        for (;;) {
            skip_ws();
            if (pos >= s.size()) {
                if (braced) fail("missing '}'");
                break;
            }
            if (braced && consume('}')) break;
            std::string key = word();
            skip_ws();
            if (consume('=')) {
                node.entries.emplace_back(std::move(key), value());
            } else if (peek('{')) {
                node.entries.emplace_back(
                    std::move(key), ConfigValue{std::make_shared<ConfigNode>(block())});
            } else {
                fail("expected '=' or '{' after key '" + key + "'");
            }
        }
        return node;
    }
};

void serialize_value(const ConfigValue& v, std::ostream& os, int indent);

void serialize_node(const ConfigNode& n, std::ostream& os, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const auto& [k, v] : n.entries) {
        os << pad << k;
        if (v.is_block()) {
            os << " {\n";
            serialize_node(v.block(), os, indent + 1);
            os << pad << "}\n";
        } else {
            os << " = ";
            serialize_value(v, os, indent);
            os << "\n";
        }
    }
}

bool needs_quotes(const std::string& s) {
    if (s.empty()) return true;
    for (char c : s)
        if (!Parser::word_char(c)) return true;
    return false;
}

void serialize_value(const ConfigValue& v, std::ostream& os, int indent) {
    if (v.is_number()) {
        std::ostringstream tmp;
        tmp.precision(17);
        tmp << v.number();
        os << tmp.str();
    } else if (v.is_string()) {
        if (needs_quotes(v.str()))
            os << '"' << v.str() << '"';
        else
            os << v.str();
    } else if (v.is_list()) {
        os << "[";
        const auto& items = v.list();
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) os << ", ";
            serialize_value(items[i], os, indent);
        }
        os << "]";
    }
}

}  // namespace

ConfigNode ConfigNode::parse(const std::string& text) {
    Parser p{text};
    return p.block();
}

ConfigNode ConfigNode::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigParseError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse(buf.str());
}

std::string ConfigNode::serialize(int indent) const {
    std::ostringstream os;
    serialize_node(*this, os, indent);
    return os.str();
}

}  // namespace bbfs
