#include "chiralpinem/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chiralpinem/errors.hpp"

namespace chiralpinem::config {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    std::string origin;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
    }
    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char take() {
        const char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    void skip_inline_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
    }
    void skip_ws_and_comments() {
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else {
                break;
            }
        }
    }
};

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_bare_key(Cursor& cur) {
    std::string key;
    while (!cur.eof() && is_bare_key_char(cur.peek())) key.push_back(cur.take());
    if (key.empty()) cur.fail("expected key");
    return key;
}

Value parse_value(Cursor& cur);

Value parse_string_value(Cursor& cur) {
    cur.take();  // opening quote
    std::string out;
    while (true) {
        if (cur.eof()) cur.fail("unterminated string");
        char c = cur.take();
        if (c == '"') break;
        if (c == '\\') {
            if (cur.eof()) cur.fail("unterminated escape");
            const char e = cur.take();
            switch (e) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                default: cur.fail(std::string("unsupported escape \\") + e);
            }
        } else {
            out.push_back(c);
        }
    }
    return Value(Value::Storage(out));
}

Value parse_inline_table(Cursor& cur) {
    cur.take();  // '{'
    Value::Table table;
    cur.skip_inline_ws();
    if (!cur.eof() && cur.peek() == '}') {
        cur.take();
        return Value(Value::Storage(table));
    }
    while (true) {
        cur.skip_inline_ws();
        const std::string key = parse_bare_key(cur);
        cur.skip_inline_ws();
        if (cur.eof() || cur.take() != '=') cur.fail("expected '=' in inline table");
        cur.skip_inline_ws();
        table[key] = parse_value(cur);
        cur.skip_inline_ws();
        if (cur.eof()) cur.fail("unterminated inline table");
        const char c = cur.take();
        if (c == '}') break;
        if (c != ',') cur.fail("expected ',' or '}' in inline table");
    }
    return Value(Value::Storage(table));
}

Value parse_array(Cursor& cur) {
    cur.take();  // '['
    Value::Array arr;
    cur.skip_ws_and_comments();
    if (!cur.eof() && cur.peek() == ']') {
        cur.take();
        return Value(Value::Storage(arr));
    }
    while (true) {
        cur.skip_ws_and_comments();
        arr.push_back(parse_value(cur));
        cur.skip_ws_and_comments();
        if (cur.eof()) cur.fail("unterminated array");
        const char c = cur.take();
        if (c == ']') break;
        if (c != ',') cur.fail("expected ',' or ']' in array");
        cur.skip_ws_and_comments();
        if (!cur.eof() && cur.peek() == ']') {  // trailing comma
            cur.take();
            break;
        }
    }
    return Value(Value::Storage(arr));
}

Value parse_value(Cursor& cur) {
    if (cur.eof()) cur.fail("expected value");
    const char c = cur.peek();
    if (c == '"') return parse_string_value(cur);
    if (c == '{') return parse_inline_table(cur);
    if (c == '[') return parse_array(cur);
    if (cur.text.compare(cur.pos, 4, "true") == 0 &&
        (cur.pos + 4 >= cur.text.size() || !is_bare_key_char(cur.text[cur.pos + 4]))) {
        cur.pos += 4;
        return Value(Value::Storage(true));
    }
    if (cur.text.compare(cur.pos, 5, "false") == 0 &&
        (cur.pos + 5 >= cur.text.size() || !is_bare_key_char(cur.text[cur.pos + 5]))) {
        cur.pos += 5;
        return Value(Value::Storage(false));
    }
    // number
    std::string tok;
    while (!cur.eof()) {
        const char d = cur.peek();
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '+' || d == '-' || d == '.' ||
            d == 'e' || d == 'E' || d == '_') {
            if (d != '_') tok.push_back(d);
            cur.take();
        } else {
            break;
        }
    }
    if (tok.empty()) cur.fail("expected value");
    char* end = nullptr;
    const double num = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) cur.fail("malformed number '" + tok + "'");
    return Value(Value::Storage(num));
}

}  // namespace

Document Document::parse_string(const std::string& text, const std::string& origin) {
    Document doc;
    Cursor cur{text, 0, 1, origin};
    std::string section;  // top-level keys live in the "" section
    doc.sections_[section] = {};

    while (true) {
        cur.skip_ws_and_comments();
        if (cur.eof()) break;
        if (cur.peek() == '[') {
            cur.take();
            cur.skip_inline_ws();
            section = parse_bare_key(cur);
            cur.skip_inline_ws();
            if (cur.eof() || cur.take() != ']') cur.fail("expected ']' after section name");
            doc.sections_.try_emplace(section);
            continue;
        }
        std::string key = parse_bare_key(cur);
        std::vector<std::string> dotted;
        while (!cur.eof() && cur.peek() == '.') {
            cur.take();
            dotted.push_back(parse_bare_key(cur));
        }
        cur.skip_inline_ws();
        if (cur.eof() || cur.take() != '=') cur.fail("expected '=' after key '" + key + "'");
        cur.skip_inline_ws();
        Value val = parse_value(cur);
        cur.skip_inline_ws();
        if (!cur.eof() && cur.peek() == '#') {
            while (!cur.eof() && cur.peek() != '\n') ++cur.pos;
        }
        if (!cur.eof() && cur.peek() != '\n') cur.fail("trailing characters after value");

        if (dotted.empty()) {
            doc.sections_[section][key] = std::move(val);
        } else {
            // a.b.c = v nests tables under key a
            Value* slot = &doc.sections_[section][key];
            if (!slot->is_table()) *slot = Value(Value::Storage(Value::Table{}));
            for (std::size_t i = 0; i + 1 < dotted.size(); ++i) {
                Value& next = slot->as_table()[dotted[i]];
                if (!next.is_table()) next = Value(Value::Storage(Value::Table{}));
                slot = &next;
            }
            slot->as_table()[dotted.back()] = std::move(val);
        }
    }
    return doc;
}

Document Document::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_string(ss.str(), path);
}

const Value* Document::find(const std::string& section, const std::string& key) const {
    const auto sit = sections_.find(section);
    if (sit == sections_.end()) return nullptr;
    const auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    return &kit->second;
}

bool Document::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

bool Document::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

double Document::number_or(const std::string& section, const std::string& key,
                           double fallback) const {
    const Value* v = find(section, key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(section + "." + key + ": expected a number");
    return v->as_number();
}

double Document::require_number(const std::string& section, const std::string& key) const {
    const Value* v = find(section, key);
    if (!v) throw ConfigError(section + "." + key + ": missing required key");
    if (!v->is_number()) throw ConfigError(section + "." + key + ": expected a number");
    return v->as_number();
}

std::string Document::string_or(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
    const Value* v = find(section, key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(section + "." + key + ": expected a string");
    return v->as_string();
}

bool Document::bool_or(const std::string& section, const std::string& key, bool fallback) const {
    const Value* v = find(section, key);
    if (!v) return fallback;
    if (!v->is_bool()) throw ConfigError(section + "." + key + ": expected a boolean");
    return v->as_bool();
}

std::vector<double> Document::number_array_or(const std::string& section, const std::string& key,
                                              const std::vector<double>& fallback) const {
    const Value* v = find(section, key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(section + "." + key + ": expected an array");
    std::vector<double> out;
    out.reserve(v->as_array().size());
    for (const Value& e : v->as_array()) {
        if (!e.is_number())
            throw ConfigError(section + "." + key + ": expected an array of numbers");
        out.push_back(e.as_number());
    }
    return out;
}

double Document::table_number_or(const std::string& section, const std::string& key,
                                 const std::string& subkey, double fallback) const {
    const Value* v = find(section, key);
    if (!v) return fallback;
    if (!v->is_table())
        throw ConfigError(section + "." + key + ": expected an inline table");
    const auto it = v->as_table().find(subkey);
    if (it == v->as_table().end()) return fallback;
    if (!it->second.is_number())
        throw ConfigError(section + "." + key + "." + subkey + ": expected a number");
    return it->second.as_number();
}

}  // namespace chiralpinem::config
