#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bbfs {

/// Errors from the two config stages; the CLI maps them to exit codes 2 / 3.
struct ConfigParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered key/value tree for the experiment config format:
///
///   file  := entry*
///   entry := key '=' value | key block
///   value := number | string | '[' value (',' value)* ']'
///   block := '{' entry* '}'
///
/// '#' starts a comment; strings may be bare words or double-quoted.
/// Entry order is preserved (checks run in file order).
class ConfigNode;

struct ConfigValue {
    std::variant<double, std::string, std::vector<ConfigValue>,
                 std::shared_ptr<ConfigNode>>
        v;

    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_list() const { return std::holds_alternative<std::vector<ConfigValue>>(v); }
    bool is_block() const {
        return std::holds_alternative<std::shared_ptr<ConfigNode>>(v);
    }

    double number() const;
    const std::string& str() const;
    const std::vector<ConfigValue>& list() const;
    const ConfigNode& block() const;
};

class ConfigNode {
public:
    std::vector<std::pair<std::string, ConfigValue>> entries;

    bool has(const std::string& key) const;
    const ConfigValue* find(const std::string& key) const;
    const ConfigValue& at(const std::string& key) const;

    double number_or(const std::string& key, double fallback) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;
    bool bool_or(const std::string& key, bool fallback) const;
    const ConfigNode* block_or_null(const std::string& key) const;

    void set_number(const std::string& key, double v);
    void set_string(const std::string& key, const std::string& v);
    ConfigNode& add_block(const std::string& key);

    static ConfigNode parse(const std::string& text);
    static ConfigNode parse_file(const std::string& path);
    std::string serialize(int indent = 0) const;
};

}  // namespace bbfs
