#include "agodd/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

namespace agodd {

std::string ParseError::message() const {
    std::ostringstream os;
    os << span.file << ":" << span.line << ":" << span.column << ": expected "
       << expected << ", found " << found;
    return os.str();
}

std::string quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

namespace {

// ---------------------------------------------------------------- lexer --

struct Token {
    enum class Kind { ident, word, str, num, punct, percent, eof };
    Kind kind = Kind::eof;
    std::string text;   // unescaped value for str; raw spelling otherwise
    double number = 0;  // num only
    int line = 1;
    int column = 1;
};

struct ParseAbort {
    ParseError error;
};

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = {
        "odd",        "framing",     "requirement", "capability",
        "hara",       "dimension",   "unit",        "range",
        "values",     "scenery",     "environment", "dynamic_objects",
        "permissive", "restrictive", "attr",        "tag",
        "iter",       "constraint",  "in",          "oneof",
        "process",    "start",       "trigger",     "end",
        "end_value",  "interaction", "after",       "state",
        "scenario",   "layer",       "bind",        "elapsed",
        "measured"};
    return words;
}

class Lexer {
public:
    Lexer(std::string_view text, std::string filename)
        : text_(text), file_(std::move(filename)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            Token t = next();
            out.push_back(t);
            if (t.kind == Token::Kind::eof) break;
        }
        return out;
    }

private:
    std::string_view text_;
    std::string file_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;

    [[noreturn]] void fail(int line, int column, std::string expected,
                           std::string found) {
        throw ParseAbort{ParseError{
            {file_, line, column}, std::move(expected), std::move(found)}};
    }

    char peek(size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    bool done() const { return pos_ >= text_.size(); }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_space_and_comments() {
        for (;;) {
            while (!done() && (peek() == ' ' || peek() == '\t' ||
                               peek() == '\r' || peek() == '\n'))
                advance();
            if (!done() && peek() == '#') {
                while (!done() && peek() != '\n') advance();
                continue;
            }
            break;
        }
    }

    Token token(Token::Kind kind, std::string text, int line, int column) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = line;
        t.column = column;
        return t;
    }

    Token next() {
        if (done()) return token(Token::Kind::eof, "", line_, column_);
        int line = line_, column = column_;
        char c = peek();
        if (c == '"') return lex_string(line, column);
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1)))))
            return lex_number(line, column);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return lex_word(line, column);
        if (c == '%') {
            advance();
            return token(Token::Kind::percent, "%", line, column);
        }
        if (c == '<' || c == '>') {
            advance();
            std::string text(1, c);
            if (peek() == '=') {
                advance();
                text += '=';
            }
            return token(Token::Kind::punct, text, line, column);
        }
        static const std::string singles = "{}[](),:/=";
        if (singles.find(c) != std::string::npos) {
            advance();
            return token(Token::Kind::punct, std::string(1, c), line, column);
        }
        advance();
        std::string found = "character '";
        found += (std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c)
                                                              : "?");
        found += "'";
        fail(line, column, "a token", found);
    }

    Token lex_string(int line, int column) {
        advance();  // opening quote
        std::string value;
        for (;;) {
            if (done() || peek() == '\n')
                fail(line, column, "closing '\"'",
                     done() ? "end of input" : "end of line");
            char c = advance();
            if (c == '"') break;
            if (c == '\\') {
                if (done()) fail(line, column, "escape character", "end of input");
                char e = advance();
                switch (e) {
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    default:
                        fail(line_, column_ - 1, "one of \\\" \\\\ \\n \\t",
                             std::string("'\\") + e + "'");
                }
                continue;
            }
            value += c;
        }
        return token(Token::Kind::str, value, line, column);
    }

    Token lex_number(int line, int column) {
        std::string raw;
        if (peek() == '-') raw += advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) raw += advance();
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            raw += advance();
            while (std::isdigit(static_cast<unsigned char>(peek())))
                raw += advance();
        }
        Token t = token(Token::Kind::num, raw, line, column);
        t.number = std::strtod(raw.c_str(), nullptr);
        return t;
    }

    Token lex_word(int line, int column) {
        std::string raw;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
            raw += advance();
        // Condition tags carry a dotted sub-index (C2.1).
        if (raw.size() >= 2 && raw[0] == 'C' &&
            std::all_of(raw.begin() + 1, raw.end(),
                        [](char d) {
                            return std::isdigit(static_cast<unsigned char>(d));
                        }) &&
            peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            raw += advance();
            while (std::isdigit(static_cast<unsigned char>(peek())))
                raw += advance();
        }
        bool lower = std::islower(static_cast<unsigned char>(raw[0])) ||
                     raw[0] == '_';
        return token(lower ? Token::Kind::ident : Token::Kind::word, raw, line,
                     column);
    }
};

// --------------------------------------------------------------- parser --

constexpr int kMaxDepth = 64;

class Parser {
public:
    Parser(std::string_view text, std::string filename)
        : file_(std::move(filename)) {
        tokens_ = Lexer(text, file_).run();
    }

    AgOdd parse_odd_file() {
        AgOdd odd;
        expect_keyword("odd");
        odd.name = expect_string("ODD name");
        expect_punct("{");
        if (at_keyword("framing")) parse_framing(odd.framing);
        while (at_keyword("dimension")) odd.dimensions.push_back(parse_dimension());
        std::set<std::string> seen;
        while (peek().kind == Token::Kind::ident &&
               category_from_name(peek().text)) {
            Token head = peek();
            CategoryNode cat = parse_category();
            if (!seen.insert(category_name(cat.kind)).second)
                fail_at(head, "each category at most once",
                        "second '" + category_name(cat.kind) + "' block");
            odd.category(cat.kind) = std::move(cat);
        }
        while (at_keyword("process")) odd.processes.push_back(parse_process(odd));
        expect_punct("}");
        expect_eof();
        return odd;
    }

    std::vector<Scenario> parse_scenario_file() {
        std::vector<Scenario> out;
        while (at_keyword("scenario")) out.push_back(parse_scenario());
        expect_eof();
        return out;
    }

    std::vector<ProcessEvent> parse_event_file() {
        std::vector<ProcessEvent> out;
        for (;;) {
            if (at_keyword("interaction")) {
                next();
                out.push_back(InteractionEvent{expect_tag()});
            } else if (at_keyword("elapsed")) {
                next();
                double d = expect_number("a duration");
                out.push_back(ElapsedEvent{d, expect_unit()});
            } else if (at_keyword("measured")) {
                next();
                std::string dim = expect_ident("a dimension name");
                double v = expect_number("a value");
                out.push_back(MeasuredEvent{dim, {v, expect_unit()}});
            } else {
                break;
            }
        }
        expect_eof();
        return out;
    }

private:
    std::string file_;
    std::vector<Token> tokens_;
    size_t pos_ = 0;

    const Token& peek(size_t ahead = 0) const {
        size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    Token next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Token::Kind::ident: return "identifier '" + t.text + "'";
            case Token::Kind::word: return "'" + t.text + "'";
            case Token::Kind::str: return "string " + quote(t.text);
            case Token::Kind::num: return "number " + t.text;
            case Token::Kind::punct: return "'" + t.text + "'";
            case Token::Kind::percent: return "'%'";
            case Token::Kind::eof: return "end of input";
        }
        return "?";
    }

    [[noreturn]] void fail_at(const Token& t, std::string expected,
                              std::string found) {
        throw ParseAbort{ParseError{{file_, t.line, t.column},
                                    std::move(expected), std::move(found)}};
    }
    [[noreturn]] void fail(std::string expected) {
        fail_at(peek(), std::move(expected), describe(peek()));
    }

    bool at_keyword(const std::string& kw) const {
        return peek().kind == Token::Kind::ident && peek().text == kw;
    }
    void expect_keyword(const std::string& kw) {
        if (!at_keyword(kw)) fail("'" + kw + "'");
        next();
    }
    bool accept_punct(const std::string& p) {
        if (peek().kind == Token::Kind::punct && peek().text == p) {
            next();
            return true;
        }
        return false;
    }
    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) fail("'" + p + "'");
    }
    std::string expect_string(const std::string& what) {
        if (peek().kind != Token::Kind::str) fail(what + " (a quoted string)");
        return next().text;
    }
    std::string expect_ident(const std::string& what) {
        if (peek().kind != Token::Kind::ident || reserved_words().count(peek().text))
            fail(what);
        return next().text;
    }
    double expect_number(const std::string& what) {
        if (peek().kind != Token::Kind::num) fail(what + " (a number)");
        return next().number;
    }
    int expect_int(const std::string& what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::num || t.text.find('.') != std::string::npos ||
            t.text[0] == '-')
            fail(what + " (a non-negative integer)");
        return static_cast<int>(next().number);
    }
    CdvTag expect_tag() {
        if (peek().kind != Token::Kind::word) fail("a tag (SA1, EA1 or C1)");
        auto tag = parse_tag(peek().text);
        if (!tag) fail("a tag (SA1, EA1 or C1)");
        next();
        return *tag;
    }

    // A unit is one or two slash-joined words on the same line as the token
    // before it ("%", "cm", "t/ha"). Keywords never act as units.
    bool unit_starts_here(int line) const {
        const Token& t = peek();
        if (t.line != line) return false;
        if (t.kind == Token::Kind::percent) return true;
        return t.kind == Token::Kind::ident && !reserved_words().count(t.text);
    }
    std::string unit_part() {
        if (peek().kind == Token::Kind::percent) {
            next();
            return "%";
        }
        if (peek().kind != Token::Kind::ident ||
            reserved_words().count(peek().text))
            fail("a unit");
        return next().text;
    }
    std::string expect_unit() {
        std::string unit = unit_part();
        if (peek().kind == Token::Kind::punct && peek().text == "/" &&
            peek(1).kind == Token::Kind::ident &&
            !reserved_words().count(peek(1).text)) {
            next();
            unit += "/" + unit_part();
        }
        return unit;
    }
    std::string optional_unit(int line) {
        return unit_starts_here(line) ? expect_unit() : std::string();
    }

    void parse_framing(FramingLimitations& framing) {
        expect_keyword("framing");
        expect_punct("{");
        for (;;) {
            if (at_keyword("requirement")) {
                next();
                framing.functional_requirements.push_back(
                    expect_string("a requirement"));
            } else if (at_keyword("capability")) {
                next();
                framing.system_capabilities.push_back(
                    expect_string("a capability"));
            } else if (at_keyword("hara")) {
                next();
                framing.hara_results.push_back(expect_string("a hazard result"));
            } else {
                break;
            }
        }
        expect_punct("}");
    }

    DimensionDecl parse_dimension() {
        expect_keyword("dimension");
        DimensionDecl dim;
        dim.name = expect_ident("a dimension name");
        expect_keyword("unit");
        dim.unit = expect_unit();
        if (at_keyword("range")) {
            next();
            expect_punct("[");
            double lo = expect_number("a range bound");
            expect_punct(",");
            double hi = expect_number("a range bound");
            expect_punct("]");
            dim.domain = Interval{lo, hi};
        } else if (at_keyword("values")) {
            next();
            expect_punct("{");
            std::vector<std::string> labels;
            labels.push_back(expect_string("a value"));
            while (peek().kind == Token::Kind::str) labels.push_back(next().text);
            expect_punct("}");
            dim.domain = std::move(labels);
        } else {
            fail("'range' or 'values'");
        }
        return dim;
    }

    std::optional<Mode> optional_mode() {
        if (at_keyword("permissive")) {
            next();
            return Mode::permissive;
        }
        if (at_keyword("restrictive")) {
            next();
            return Mode::restrictive;
        }
        return std::nullopt;
    }

    CategoryNode parse_category() {
        CategoryNode cat;
        cat.kind = *category_from_name(next().text);
        cat.mode = optional_mode().value_or(Mode::restrictive);
        expect_punct("{");
        while (at_keyword("attr"))
            cat.children.push_back(parse_attribute(0, 1));
        expect_punct("}");
        return cat;
    }

    AttributeNode parse_attribute(int lod, int depth) {
        if (depth > kMaxDepth)
            fail_at(peek(), "shallower nesting",
                    "attributes nested deeper than " + std::to_string(kMaxDepth) +
                        " levels");
        expect_keyword("attr");
        AttributeNode node;
        node.name = expect_string("an attribute name");
        node.lod = lod;
        node.mode = optional_mode().value_or(Mode::permissive);
        if (at_keyword("tag")) {
            next();
            node.tags.insert(expect_tag());
            while (accept_punct(",")) node.tags.insert(expect_tag());
        }
        if (at_keyword("iter")) {
            next();
            node.iteration = expect_int("an iteration number");
        }
        if (accept_punct("{")) {
            for (;;) {
                if (at_keyword("constraint"))
                    node.constraints.push_back(parse_constraint());
                else if (at_keyword("attr"))
                    node.children.push_back(parse_attribute(lod + 1, depth + 1));
                else
                    break;
            }
            expect_punct("}");
        }
        return node;
    }

    Constraint parse_constraint() {
        expect_keyword("constraint");
        Constraint c;
        c.dimension = expect_ident("a dimension name");
        const Token& t = peek();
        if (t.kind == Token::Kind::punct &&
            (t.text == "<=" || t.text == ">=" || t.text == "<" || t.text == ">" ||
             t.text == "=")) {
            std::string rel = next().text;
            c.rel = rel == "<=" ? Relation::le
                  : rel == ">=" ? Relation::ge
                  : rel == "<"  ? Relation::lt
                  : rel == ">"  ? Relation::gt
                                : Relation::eq;
            Token num = peek();
            c.bound.value = expect_number("a bound");
            c.bound.unit = optional_unit(num.line);
        } else if (at_keyword("in")) {
            next();
            c.rel = Relation::in_interval;
            expect_punct("[");
            c.interval.lo = expect_number("an interval bound");
            expect_punct(",");
            c.interval.hi = expect_number("an interval bound");
            Token close = peek();
            expect_punct("]");
            c.unit = optional_unit(close.line);
        } else if (at_keyword("oneof")) {
            next();
            c.rel = Relation::in_set;
            expect_punct("{");
            c.labels.push_back(expect_string("a value"));
            while (peek().kind == Token::Kind::str)
                c.labels.push_back(next().text);
            expect_punct("}");
        } else {
            fail("a relation (<=, >=, <, >, =, in, oneof)");
        }
        return c;
    }

    ProcessDef parse_process(const AgOdd& odd) {
        expect_keyword("process");
        ProcessDef p;
        p.name = expect_string("a process name");
        expect_punct("{");
        if (at_keyword("start")) {
            next();
            p.start_tags.push_back(expect_tag());
            while (peek().kind == Token::Kind::word)
                p.start_tags.push_back(expect_tag());
        }
        if (at_keyword("trigger")) {
            next();
            p.trigger = parse_trigger();
        }
        if (at_keyword("end")) {
            next();
            p.end_tags.push_back(expect_tag());
            while (peek().kind == Token::Kind::word)
                p.end_tags.push_back(expect_tag());
        }
        while (at_keyword("end_value")) {
            next();
            EndValueOverride ev;
            ev.dimension = expect_ident("a dimension name");
            expect_punct("=");
            if (peek().kind == Token::Kind::str) {
                ev.value = next().text;
            } else {
                Token num = peek();
                Quantity q;
                q.value = expect_number("a value");
                q.unit = optional_unit(num.line);
                if (q.unit.empty())
                    if (const auto* dim = odd.find_dimension(ev.dimension))
                        q.unit = dim->unit;
                ev.value = q;
            }
            p.end_values.push_back(std::move(ev));
        }
        expect_punct("}");
        return p;
    }

    Trigger parse_trigger() {
        if (at_keyword("interaction")) {
            next();
            expect_punct("(");
            InteractionTrigger trig;
            trig.tags.push_back(expect_tag());
            while (accept_punct(",")) trig.tags.push_back(expect_tag());
            expect_punct(")");
            return trig;
        }
        if (at_keyword("after")) {
            next();
            RelativeTimeTrigger trig;
            trig.duration = expect_number("a duration");
            trig.unit = expect_unit();
            return trig;
        }
        if (at_keyword("state")) {
            next();
            expect_punct("(");
            StateChangeTrigger trig;
            trig.dimension = expect_ident("a dimension name");
            const Token& t = peek();
            if (t.kind != Token::Kind::punct ||
                (t.text != "<=" && t.text != ">=" && t.text != "<" &&
                 t.text != ">" && t.text != "="))
                fail("a relation (<=, >=, <, >, =)");
            std::string rel = next().text;
            trig.rel = rel == "<=" ? Relation::le
                     : rel == ">=" ? Relation::ge
                     : rel == "<"  ? Relation::lt
                     : rel == ">"  ? Relation::gt
                                   : Relation::eq;
            trig.value = expect_number("a value");
            expect_punct(")");
            return trig;
        }
        fail("'interaction', 'after' or 'state'");
    }

    Scenario parse_scenario() {
        expect_keyword("scenario");
        Scenario s;
        s.name = expect_string("a scenario name");
        expect_punct("{");
        while (at_keyword("layer")) {
            next();
            int layer = expect_int("a layer number");
            expect_punct(":");
            if (at_keyword("bind")) {
                next();
                ScenarioBinding b;
                b.layer = layer;
                b.path.push_back(expect_string("a path element"));
                while (accept_punct("/"))
                    b.path.push_back(expect_string("a path element"));
                if (accept_punct("=")) {
                    BindingValue v;
                    if (peek().kind == Token::Kind::str) {
                        v.kind = BindingValue::Kind::label;
                        v.label = next().text;
                    } else {
                        v.kind = BindingValue::Kind::quantity;
                        Token num = peek();
                        v.quantity.value = expect_number("a value");
                        v.quantity.unit = optional_unit(num.line);
                    }
                    b.value = std::move(v);
                } else if (at_keyword("in")) {
                    next();
                    BindingValue v;
                    v.kind = BindingValue::Kind::range;
                    expect_punct("[");
                    v.range.lo = expect_number("an interval bound");
                    expect_punct(",");
                    v.range.hi = expect_number("an interval bound");
                    Token close = peek();
                    expect_punct("]");
                    v.unit = optional_unit(close.line);
                    b.value = std::move(v);
                }
                s.bindings.push_back(std::move(b));
            } else if (at_keyword("process")) {
                next();
                s.processes.emplace_back(layer, expect_string("a process name"));
            } else {
                fail("'bind' or 'process'");
            }
        }
        expect_punct("}");
        return s;
    }

    void expect_eof() {
        if (peek().kind != Token::Kind::eof) fail("end of input");
    }
};

// Fills units the source omitted so serialized output is always explicit.
void resolve_units(AgOdd& odd) {
    auto fix = [&](Constraint& c) {
        const DimensionDecl* dim = odd.find_dimension(c.dimension);
        if (!dim) return;
        if (c.rel == Relation::in_interval) {
            if (c.unit.empty()) c.unit = dim->unit;
        } else if (c.rel != Relation::in_set) {
            if (c.bound.unit.empty()) c.bound.unit = dim->unit;
        }
    };
    std::function<void(AttributeNode&)> walk = [&](AttributeNode& node) {
        for (auto& c : node.constraints) fix(c);
        for (auto& child : node.children) walk(child);
    };
    for (auto& cat : odd.categories)
        for (auto& child : cat.children) walk(child);
}

// ----------------------------------------------------------- serializer --

class Writer {
public:
    std::string out;

    void line(int indent, const std::string& text) {
        out.append(static_cast<size_t>(indent) * 2, ' ');
        out += text;
        out += '\n';
    }
};

std::string constraint_text(const Constraint& c) {
    std::string out = "constraint " + c.dimension + " ";
    switch (c.rel) {
        case Relation::le:
        case Relation::ge:
        case Relation::lt:
        case Relation::gt:
        case Relation::eq:
            out += relation_symbol(c.rel) + " " + format_number(c.bound.value);
            if (!c.bound.unit.empty()) out += " " + c.bound.unit;
            break;
        case Relation::in_interval:
            out += "in [" + format_number(c.interval.lo) + ", " +
                   format_number(c.interval.hi) + "]";
            if (!c.unit.empty()) out += " " + c.unit;
            break;
        case Relation::in_set: {
            out += "oneof {";
            for (const auto& l : c.labels) out += " " + quote(l);
            out += " }";
            break;
        }
    }
    return out;
}

std::string tags_text(const std::set<CdvTag>& tags) {
    std::string out;
    for (const auto& tag : tags) {
        if (!out.empty()) out += ", ";
        out += render_tag(tag);
    }
    return out;
}

void write_attribute(Writer& w, const AttributeNode& node, int indent) {
    std::string head = "attr " + quote(node.name);
    if (node.mode == Mode::restrictive) head += " restrictive";
    if (!node.tags.empty()) head += " tag " + tags_text(node.tags);
    if (node.iteration) head += " iter " + std::to_string(*node.iteration);
    if (node.constraints.empty() && node.children.empty()) {
        w.line(indent, head);
        return;
    }
    w.line(indent, head + " {");
    for (const auto& c : node.constraints) w.line(indent + 1, constraint_text(c));
    for (const auto& child : node.children) write_attribute(w, child, indent + 1);
    w.line(indent, "}");
}

std::string trigger_text(const Trigger& trigger) {
    if (const auto* it = std::get_if<InteractionTrigger>(&trigger)) {
        std::string out = "trigger interaction(";
        for (size_t i = 0; i < it->tags.size(); ++i) {
            if (i) out += ", ";
            out += render_tag(it->tags[i]);
        }
        return out + ")";
    }
    if (const auto* rt = std::get_if<RelativeTimeTrigger>(&trigger))
        return "trigger after " + format_number(rt->duration) + " " + rt->unit;
    const auto& st = std::get<StateChangeTrigger>(trigger);
    return "trigger state(" + st.dimension + " " + relation_symbol(st.rel) +
           " " + format_number(st.value) + ")";
}

void write_process(Writer& w, const ProcessDef& p, int indent) {
    w.line(indent, "process " + quote(p.name) + " {");
    if (!p.start_tags.empty()) {
        std::string out = "start";
        for (const auto& t : p.start_tags) out += " " + render_tag(t);
        w.line(indent + 1, out);
    }
    if (p.trigger) w.line(indent + 1, trigger_text(*p.trigger));
    if (!p.end_tags.empty()) {
        std::string out = "end";
        for (const auto& t : p.end_tags) out += " " + render_tag(t);
        w.line(indent + 1, out);
    }
    for (const auto& ev : p.end_values) {
        std::string out = "end_value " + ev.dimension + " = ";
        if (const auto* q = std::get_if<Quantity>(&ev.value)) {
            out += format_number(q->value);
            if (!q->unit.empty()) out += " " + q->unit;
        } else {
            out += quote(std::get<std::string>(ev.value));
        }
        w.line(indent + 1, out);
    }
    w.line(indent, "}");
}

}  // namespace

ParseResult<AgOdd> parse_odd(std::string_view text, const std::string& filename) {
    try {
        AgOdd odd = Parser(text, filename).parse_odd_file();
        resolve_units(odd);
        return odd;
    } catch (const ParseAbort& abort) {
        return abort.error;
    }
}

ParseResult<std::vector<Scenario>> parse_scenarios(std::string_view text,
                                                   const std::string& filename) {
    try {
        return Parser(text, filename).parse_scenario_file();
    } catch (const ParseAbort& abort) {
        return abort.error;
    }
}

ParseResult<std::vector<ProcessEvent>> parse_events(std::string_view text,
                                                    const std::string& filename) {
    try {
        return Parser(text, filename).parse_event_file();
    } catch (const ParseAbort& abort) {
        return abort.error;
    }
}

std::string serialize_odd(const AgOdd& odd) {
    Writer w;
    w.line(0, "odd " + quote(odd.name) + " {");
    if (!odd.framing.empty()) {
        w.line(1, "framing {");
        for (const auto& s : odd.framing.functional_requirements)
            w.line(2, "requirement " + quote(s));
        for (const auto& s : odd.framing.system_capabilities)
            w.line(2, "capability " + quote(s));
        for (const auto& s : odd.framing.hara_results)
            w.line(2, "hara " + quote(s));
        w.line(1, "}");
    }
    for (const auto& dim : odd.dimensions) {
        std::string out = "dimension " + dim.name + " unit " + dim.unit + " ";
        if (const auto* iv = std::get_if<Interval>(&dim.domain)) {
            out += "range [" + format_number(iv->lo) + ", " +
                   format_number(iv->hi) + "]";
        } else {
            out += "values {";
            for (const auto& l : std::get<std::vector<std::string>>(dim.domain))
                out += " " + quote(l);
            out += " }";
        }
        w.line(1, out);
    }
    for (const auto& cat : odd.categories) {
        if (cat.children.empty() && cat.mode == Mode::restrictive) continue;
        std::string head = category_name(cat.kind);
        if (cat.mode == Mode::permissive) head += " permissive";
        w.line(1, head + " {");
        for (const auto& child : cat.children) write_attribute(w, child, 2);
        w.line(1, "}");
    }
    for (const auto& p : odd.processes) write_process(w, p, 1);
    w.line(0, "}");
    return w.out;
}

std::string serialize_scenarios(const std::vector<Scenario>& scenarios) {
    Writer w;
    for (const auto& s : scenarios) {
        w.line(0, "scenario " + quote(s.name) + " {");
        for (const auto& b : s.bindings) {
            std::string out = "layer " + std::to_string(b.layer) + ": bind ";
            for (size_t i = 0; i < b.path.size(); ++i) {
                if (i) out += "/";
                out += quote(b.path[i]);
            }
            if (b.value) {
                const BindingValue& v = *b.value;
                switch (v.kind) {
                    case BindingValue::Kind::quantity:
                        out += " = " + format_number(v.quantity.value);
                        if (!v.quantity.unit.empty()) out += " " + v.quantity.unit;
                        break;
                    case BindingValue::Kind::label:
                        out += " = " + quote(v.label);
                        break;
                    case BindingValue::Kind::range:
                        out += " in [" + format_number(v.range.lo) + ", " +
                               format_number(v.range.hi) + "]";
                        if (!v.unit.empty()) out += " " + v.unit;
                        break;
                }
            }
            w.line(1, out);
        }
        for (const auto& [layer, name] : s.processes)
            w.line(1, "layer " + std::to_string(layer) + ": process " +
                          quote(name));
        w.line(0, "}");
    }
    return w.out;
}

std::string serialize_events(const std::vector<ProcessEvent>& events) {
    std::string out;
    for (const auto& e : events) {
        out += render_event(e);
        out += '\n';
    }
    return out;
}

}  // namespace agodd
