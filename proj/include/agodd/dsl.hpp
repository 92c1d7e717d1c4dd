#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "agodd/model.hpp"
#include "agodd/process.hpp"
#include "agodd/scenario.hpp"

// Textual format for ODDs (.agodd), scenario sets (.agsc) and event
// scripts (.agev). Parsing is total: any byte string yields either a value
// or a ParseError, never an exception. Serialization is canonical; a
// canonical document round-trips byte for byte.

namespace agodd {

struct ParseError {
    SourceSpan span;
    std::string expected;
    std::string found;
    std::string code = "syntax";

    std::string message() const;
};

template <class T>
class ParseResult {
public:
    ParseResult(T value) : v_(std::move(value)) {}
    ParseResult(ParseError error) : v_(std::move(error)) {}

    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }
    const T& value() const { return std::get<0>(v_); }
    T take() { return std::move(std::get<0>(v_)); }
    const ParseError& error() const { return std::get<1>(v_); }

private:
    std::variant<T, ParseError> v_;
};

ParseResult<AgOdd> parse_odd(std::string_view text,
                             const std::string& filename = "<input>");

ParseResult<std::vector<Scenario>> parse_scenarios(
    std::string_view text, const std::string& filename = "<input>");

ParseResult<std::vector<ProcessEvent>> parse_events(
    std::string_view text, const std::string& filename = "<input>");

std::string serialize_odd(const AgOdd& odd);

std::string serialize_scenarios(const std::vector<Scenario>& scenarios);

std::string serialize_events(const std::vector<ProcessEvent>& events);

// Quotes and escapes a string literal the way the serializer writes it.
std::string quote(const std::string& text);

}  // namespace agodd
