#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace chiralpinem::config {

/// Minimal TOML subset sufficient for scenario files: [section] headers,
/// key = value lines with strings, numbers, booleans, flat arrays and inline
/// tables, dotted keys (a.b = v nests like a = { b = v }), and # comments.
class Value {
public:
    using Table = std::map<std::string, Value>;
    using Array = std::vector<Value>;
    using Storage = std::variant<std::string, double, bool, Table, Array>;

    Value() : v_(0.0) {}
    explicit Value(Storage s) : v_(std::move(s)) {}

    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_number() const { return std::holds_alternative<double>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_table() const { return std::holds_alternative<Table>(v_); }
    bool is_array() const { return std::holds_alternative<Array>(v_); }

    const std::string& as_string() const { return std::get<std::string>(v_); }
    double as_number() const { return std::get<double>(v_); }
    bool as_bool() const { return std::get<bool>(v_); }
    const Table& as_table() const { return std::get<Table>(v_); }
    const Array& as_array() const { return std::get<Array>(v_); }
    Table& as_table() { return std::get<Table>(v_); }

private:
    Storage v_;
};

class Document {
public:
    static Document parse_file(const std::string& path);
    static Document parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    /// Typed getters; the *_or forms fall back to a default, the require_*
    /// forms throw ConfigError naming "section.key".
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    double require_number(const std::string& section, const std::string& key) const;
    std::string string_or(const std::string& section, const std::string& key,
                          const std::string& fallback) const;
    bool bool_or(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> number_array_or(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const;

    /// Number inside an inline table, e.g. polarization = { jones_x_re = 1 }.
    double table_number_or(const std::string& section, const std::string& key,
                           const std::string& subkey, double fallback) const;

    const std::map<std::string, Value::Table>& sections() const { return sections_; }

private:
    const Value* find(const std::string& section, const std::string& key) const;
    std::map<std::string, Value::Table> sections_;
};

}  // namespace chiralpinem::config
