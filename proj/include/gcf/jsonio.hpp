/// @file jsonio.hpp
/// @brief Minimal JSON document model with source positions and a
///        deterministic emitter.
///
/// The config contract needs two things off-the-shelf parsers don't give:
/// every key carries its line/column (so "unknown key" diagnostics anchor
/// into the user's file), and numbers serialize with a fixed 17-significant-
/// digit format so artifacts are bitwise reproducible.  Objects preserve
/// insertion order; duplicate keys are rejected at parse time.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gcf/errors.hpp"

namespace gcf::json {

enum class Type { null, boolean, number, string, array, object };

struct Value {
    Type type = Type::null;
    bool as_bool = false;
    double as_number = 0.0;
    bool number_is_integer = false;  ///< lexeme had no '.', 'e', or 'E'
    std::string as_string;
    std::vector<Value> items;                              ///< array elements
    std::vector<std::pair<std::string, Value>> members;    ///< object entries, ordered
    int line = 0, column = 0;  ///< position of the value's first token (1-based)

    bool is_object() const { return type == Type::object; }
    bool is_array() const { return type == Type::array; }
    bool is_number() const { return type == Type::number; }
    bool is_string() const { return type == Type::string; }
    bool is_bool() const { return type == Type::boolean; }

    const Value* find(const std::string& key) const;

    static Value make_number(double v, bool integer = false);
    static Value make_string(std::string v);
    static Value make_bool(bool v);
    static Value make_array();
    static Value make_object();

    /// Insert or overwrite a member (objects only).
    void set(const std::string& key, Value v);
};

/// Parse a complete JSON document.  Throws ConfigError with the 1-based
/// line/column of the offending token on any syntax error or duplicate key.
Value parse(const std::string& text);

/// Serialize with 2-space indentation.  Numbers print with 17 significant
/// digits (or as plain integers when flagged), independent of locale.
std::string dump(const Value& v);

/// Format one double the same way dump does.
std::string format_number(double v);

} // namespace gcf::json
