/// @file jsonio.cpp
/// @brief Recursive-descent JSON parser with positions; fixed-format emitter.

#include "gcf/jsonio.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace gcf::json {

const Value* Value::find(const std::string& key) const {
    for (const auto& [k, v] : members)
        if (k == key) return &v;
    return nullptr;
}

Value Value::make_number(double v, bool integer) {
    Value x;
    x.type = Type::number;
    x.as_number = v;
    x.number_is_integer = integer;
    return x;
}

Value Value::make_string(std::string v) {
    Value x;
    x.type = Type::string;
    x.as_string = std::move(v);
    return x;
}

Value Value::make_bool(bool v) {
    Value x;
    x.type = Type::boolean;
    x.as_bool = v;
    return x;
}

Value Value::make_array() {
    Value x;
    x.type = Type::array;
    return x;
}

Value Value::make_object() {
    Value x;
    x.type = Type::object;
    return x;
}

void Value::set(const std::string& key, Value v) {
    for (auto& [k, existing] : members) {
        if (k == key) {
            existing = std::move(v);
            return;
        }
    }
    members.emplace_back(key, std::move(v));
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Value run() {
        skip_ws();
        Value v = parse_value();
        skip_ws();
        if (pos_ < text_.size()) fail("trailing content after the document");
        return v;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("line " + std::to_string(line_) + ", column " +
                              std::to_string(col_) + ": " + msg,
                          line_, col_);
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    char advance() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
                advance();
            else
                break;
        }
    }

    void expect(char c, const char* what) {
        if (peek() != c) fail(std::string("expected ") + what);
        advance();
    }

    Value parse_value() {
        if (pos_ >= text_.size()) fail("unexpected end of document");
        const int l = line_, c = col_;
        Value v;
        switch (peek()) {
            case '{': v = parse_object(); break;
            case '[': v = parse_array(); break;
            case '"': v = Value::make_string(parse_string()); break;
            case 't': parse_literal("true"); v = Value::make_bool(true); break;
            case 'f': parse_literal("false"); v = Value::make_bool(false); break;
            case 'n': parse_literal("null"); break;  // v stays null
            default: v = parse_number(); break;
        }
        v.line = l;
        v.column = c;
        return v;
    }

    void parse_literal(const char* lit) {
        for (const char* p = lit; *p; ++p) {
            if (peek() != *p) fail(std::string("invalid token (expected '") + lit + "')");
            advance();
        }
    }

    Value parse_object() {
        Value obj = Value::make_object();
        advance();  // '{'
        skip_ws();
        if (peek() == '}') {
            advance();
            return obj;
        }
        while (true) {
            skip_ws();
            if (peek() != '"') fail("expected a quoted key");
            const int kl = line_, kc = col_;
            std::string key = parse_string();
            if (obj.find(key)) {
                throw ConfigError("line " + std::to_string(kl) + ", column " +
                                      std::to_string(kc) + ": duplicate key '" + key + "'",
                                  kl, kc);
            }
            skip_ws();
            expect(':', "':' after key");
            skip_ws();
            Value v = parse_value();
            // anchor the member at its key, which is what diagnostics want
            v.line = kl;
            v.column = kc;
            obj.members.emplace_back(std::move(key), std::move(v));
            skip_ws();
            if (peek() == ',') {
                advance();
                continue;
            }
            expect('}', "',' or '}' in object");
            return obj;
        }
    }

    Value parse_array() {
        Value arr = Value::make_array();
        advance();  // '['
        skip_ws();
        if (peek() == ']') {
            advance();
            return arr;
        }
        while (true) {
            skip_ws();
            arr.items.push_back(parse_value());
            skip_ws();
            if (peek() == ',') {
                advance();
                continue;
            }
            expect(']', "',' or ']' in array");
            return arr;
        }
    }

    std::string parse_string() {
        advance();  // opening quote
        std::string out;
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated string");
            char c = advance();
            if (c == '"') return out;
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("unterminated escape");
                const char e = advance();
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case '/': out.push_back('/'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'u': {
                        unsigned code = 0;
                        for (int i = 0; i < 4; ++i) {
                            if (pos_ >= text_.size() || !std::isxdigit(static_cast<unsigned char>(peek())))
                                fail("invalid \\u escape");
                            const char h = advance();
                            code = code * 16 +
                                   (std::isdigit(static_cast<unsigned char>(h))
                                        ? static_cast<unsigned>(h - '0')
                                        : static_cast<unsigned>(std::tolower(h) - 'a') + 10);
                        }
                        // UTF-8 encode the BMP code point (configs are ASCII
                        // in practice; surrogate pairs are not supported).
                        if (code < 0x80) {
                            out.push_back(static_cast<char>(code));
                        } else if (code < 0x800) {
                            out.push_back(static_cast<char>(0xC0 | (code >> 6)));
                            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
                        } else {
                            out.push_back(static_cast<char>(0xE0 | (code >> 12)));
                            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
                            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
                        }
                        break;
                    }
                    default: fail("invalid escape sequence");
                }
            } else {
                out.push_back(c);
            }
        }
    }

    Value parse_number() {
        const std::size_t start = pos_;
        bool integer = true;
        if (peek() == '-') advance();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("invalid number");
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        if (peek() == '.') {
            integer = false;
            advance();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("digits required after '.'");
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        }
        if (peek() == 'e' || peek() == 'E') {
            integer = false;
            advance();
            if (peek() == '+' || peek() == '-') advance();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("digits required in exponent");
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        }
        const std::string lex = text_.substr(start, pos_ - start);
        double value = 0.0;
        const auto res = std::from_chars(lex.data(), lex.data() + lex.size(), value);
        if (res.ec != std::errc{}) fail("number out of range");
        return Value::make_number(value, integer);
    }
};

void escape_into(std::string& out, const std::string& s) {
    out.push_back('"');
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
    out.push_back('"');
}

void dump_into(std::string& out, const Value& v, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (v.type) {
        case Type::null: out += "null"; break;
        case Type::boolean: out += v.as_bool ? "true" : "false"; break;
        case Type::number:
            if (v.number_is_integer && std::floor(v.as_number) == v.as_number &&
                std::abs(v.as_number) < 9.007199254740992e15) {
                out += std::to_string(static_cast<long long>(v.as_number));
            } else {
                out += format_number(v.as_number);
            }
            break;
        case Type::string: escape_into(out, v.as_string); break;
        case Type::array: {
            if (v.items.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.items.size(); ++i) {
                out += pad_in;
                dump_into(out, v.items[i], depth + 1);
                if (i + 1 < v.items.size()) out += ",";
                out += "\n";
            }
            out += pad + "]";
            break;
        }
        case Type::object: {
            if (v.members.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (std::size_t i = 0; i < v.members.size(); ++i) {
                out += pad_in;
                escape_into(out, v.members[i].first);
                out += ": ";
                dump_into(out, v.members[i].second, depth + 1);
                if (i + 1 < v.members.size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
            break;
        }
    }
}

} // namespace

Value parse(const std::string& text) { return Parser(text).run(); }

std::string format_number(double v) {
    // 17 significant digits round-trips every double; to_chars is
    // locale-independent.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string dump(const Value& v) {
    std::string out;
    dump_into(out, v, 0);
    out.push_back('\n');
    return out;
}

} // namespace gcf::json
