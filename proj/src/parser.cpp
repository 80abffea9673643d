#include "calp/syntax.hpp"

#include "validate_impl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace calp {

namespace {

enum class Tok { name, variable, number, lparen, rparen, lbracket, rbracket, comma, dot, neck, dcolon, naf, end, bad };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceLoc loc;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        Token t;
        t.loc = {line_, col_};
        if (pos_ >= src_.size()) {
            t.kind = Tok::end;
            return t;
        }
        const char c = src_[pos_];
        auto single = [&](Tok k) {
            t.kind = k;
            t.text = std::string(1, c);
            advance();
            return t;
        };
        if (std::islower(static_cast<unsigned char>(c))) {
            t.kind = Tok::name;
            t.text = take_word();
            return t;
        }
        if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::variable;
            t.text = take_word();
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            t.kind = Tok::number;
            t.text = take_number();
            return t;
        }
        switch (c) {
        case '(': return single(Tok::lparen);
        case ')': return single(Tok::rparen);
        case '[': return single(Tok::lbracket);
        case ']': return single(Tok::rbracket);
        case ',': return single(Tok::comma);
        case '.': return single(Tok::dot);
        case ':':
            if (peek(1) == '-') {
                advance(2);
                t.kind = Tok::neck;
                t.text = ":-";
                return t;
            }
            if (peek(1) == ':') {
                advance(2);
                t.kind = Tok::dcolon;
                t.text = "::";
                return t;
            }
            break;
        case '\\':
            if (peek(1) == '+') {
                advance(2);
                t.kind = Tok::naf;
                t.text = "\\+";
                return t;
            }
            break;
        default:
            break;
        }
        t.kind = Tok::bad;
        t.text = std::string(1, c);
        advance();
        return t;
    }

private:
    char peek(std::size_t off) const { return pos_ + off < src_.size() ? src_[pos_ + off] : '\0'; }

    void advance(std::size_t n = 1) {
        for (; n > 0 && pos_ < src_.size(); --n, ++pos_) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            } else {
                break;
            }
        }
    }

    std::string take_word() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            advance();
        return std::string(src_.substr(start, pos_ - start));
    }

    std::string take_number() {
        const std::size_t start = pos_;
        if (peek(0) == '-')
            advance();
        auto digits = [&] {
            while (std::isdigit(static_cast<unsigned char>(peek(0))))
                advance();
        };
        digits();
        if (peek(0) == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            advance();
            digits();
        }
        if ((peek(0) == 'e' || peek(0) == 'E') &&
            (std::isdigit(static_cast<unsigned char>(peek(1))) ||
             ((peek(1) == '-' || peek(1) == '+') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
            advance(2);
            digits();
        }
        return std::string(src_.substr(start, pos_ - start));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct SyntaxError {
    std::string code;
    std::string message;
    SourceLoc loc;
};

// Body literal as read, before belief events are resolved against frames.
struct RawLiteral {
    bool positive = true;
    bool is_belief = false;
    Atom atom;
    std::string domain;
    std::vector<std::string> elements;
    SourceLoc loc;
};

struct RawRule {
    Atom head;
    std::vector<RawLiteral> body;
    SourceLoc loc;
};

struct RawMass {
    std::string domain;
    std::vector<std::string> elements;
    double mass = 0.0;
    SourceLoc loc;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {
        try {
            shift();
        } catch (const SyntaxError& e) {
            pending_ = e;
        }
    }

    ParseResult run() {
        if (pending_) {
            diags_.push_back({pending_->code, pending_->message, pending_->loc});
            recover();
        }
        while (cur_.kind != Tok::end) {
            try {
                clause();
            } catch (const SyntaxError& e) {
                diags_.push_back({e.code, e.message, e.loc});
                recover();
            }
        }
        return assemble();
    }

    AtomParse run_atom() {
        AtomParse out;
        if (pending_) {
            out.diagnostics.push_back({pending_->code, pending_->message, pending_->loc});
            return out;
        }
        try {
            Atom a = atom();
            if (cur_.kind == Tok::dot)
                shift();
            if (cur_.kind != Tok::end)
                fail("unexpected '" + cur_.text + "' after atom");
            if (!a.ground())
                throw SyntaxError{std::string(diag::syntax_error), "query atom must be ground", cur_.loc};
            out.atom = std::move(a);
        } catch (const SyntaxError& e) {
            out.diagnostics.push_back({e.code, e.message, e.loc});
        }
        return out;
    }

private:
    void shift() {
        cur_ = lex_.next();
        if (cur_.kind == Tok::bad)
            throw SyntaxError{std::string(diag::lex_error), "unexpected character '" + cur_.text + "'", cur_.loc};
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw SyntaxError{std::string(diag::syntax_error), msg, cur_.loc};
    }

    std::string describe(const Token& t) const {
        return t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    }

    Token expect(Tok k, const char* what) {
        if (cur_.kind != k)
            fail(std::string("expected ") + what + ", found " + describe(cur_));
        Token t = cur_;
        shift();
        return t;
    }

    // Skip to just past the next clause terminator.
    void recover() {
        for (;;) {
            try {
                while (cur_.kind != Tok::dot && cur_.kind != Tok::end)
                    shift();
                if (cur_.kind == Tok::dot)
                    shift();
                return;
            } catch (const SyntaxError&) {
                // bad characters inside the skipped region are not reported again
            }
        }
    }

    double number(const Token& t) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            throw SyntaxError{std::string(diag::lex_error), "malformed number " + t.text, t.loc};
        return v;
    }

    Term term() {
        Term t;
        switch (cur_.kind) {
        case Tok::name:
        case Tok::number:
            t.name = cur_.text;
            break;
        case Tok::variable:
            t.variable = true;
            t.name = cur_.text == "_" ? "_G" + std::to_string(++anon_) : cur_.text;
            break;
        default:
            fail("expected a term, found " + describe(cur_));
        }
        shift();
        return t;
    }

    Atom atom() {
        Atom a;
        a.predicate = expect(Tok::name, "a predicate name").text;
        if (cur_.kind == Tok::lparen) {
            shift();
            a.args.push_back(term());
            while (cur_.kind == Tok::comma) {
                shift();
                a.args.push_back(term());
            }
            expect(Tok::rparen, "')'");
        }
        return a;
    }

    // [e1,...,en]; variables are reported as non-ground.
    std::vector<std::string> element_list() {
        expect(Tok::lbracket, "'['");
        std::vector<std::string> out;
        if (cur_.kind != Tok::rbracket) {
            for (;;) {
                if (cur_.kind == Tok::variable)
                    throw SyntaxError{std::string(diag::nonground_belief),
                                      "belief events must be ground, found variable " + cur_.text, cur_.loc};
                out.push_back(expect(Tok::name, "a frame element").text);
                if (cur_.kind != Tok::comma)
                    break;
                shift();
            }
        }
        expect(Tok::rbracket, "']'");
        return out;
    }

    std::string domain_id() {
        if (cur_.kind == Tok::variable)
            throw SyntaxError{std::string(diag::nonground_belief), "domain identifier must be ground, found " + cur_.text,
                              cur_.loc};
        return expect(Tok::name, "a domain identifier").text;
    }

    RawLiteral literal() {
        RawLiteral l;
        l.loc = cur_.loc;
        if (cur_.kind == Tok::naf) {
            l.positive = false;
            shift();
        }
        if (cur_.kind == Tok::name && cur_.text == "belief") {
            shift();
            expect(Tok::lparen, "'(' after belief");
            l.is_belief = true;
            l.domain = domain_id();
            expect(Tok::comma, "','");
            l.elements = element_list();
            expect(Tok::rparen, "')'");
            return l;
        }
        l.atom = atom();
        return l;
    }

    void clause() {
        const SourceLoc loc = cur_.loc;
        if (cur_.kind == Tok::number) {
            Token p = cur_;
            shift();
            expect(Tok::dcolon, "'::' after probability");
            ProbabilisticFact f;
            f.prob = number(p);
            f.atom = atom();
            expect(Tok::dot, "'.' at end of clause");
            facts_.push_back(std::move(f));
            fact_locs_.push_back(loc);
            return;
        }
        if (cur_.kind == Tok::name && (cur_.text == "domain" || cur_.text == "mass")) {
            const bool is_domain = cur_.text == "domain";
            shift();
            if (cur_.kind == Tok::lparen) {
                shift();
                std::string id = domain_id();
                expect(Tok::comma, "','");
                auto elems = element_list();
                if (is_domain) {
                    expect(Tok::rparen, "')'");
                    expect(Tok::dot, "'.' at end of declaration");
                    domains_.push_back({std::move(id), std::move(elems), {}});
                    domain_locs_.push_back(loc);
                } else {
                    expect(Tok::comma, "','");
                    Token m = expect(Tok::number, "a mass value");
                    expect(Tok::rparen, "')'");
                    expect(Tok::dot, "'.' at end of declaration");
                    masses_.push_back({std::move(id), std::move(elems), number(m), loc});
                }
                return;
            }
            fail(std::string(is_domain ? "domain" : "mass") + " declarations take arguments");
        }
        RawRule r;
        r.loc = loc;
        r.head = atom();
        if (cur_.kind == Tok::neck) {
            shift();
            r.body.push_back(literal());
            while (cur_.kind == Tok::comma) {
                shift();
                r.body.push_back(literal());
            }
        }
        expect(Tok::dot, "'.' at end of clause");
        rules_.push_back(std::move(r));
    }

    void note(std::string_view code, std::string msg, SourceLoc loc) {
        diags_.push_back({std::string(code), std::move(msg), loc});
    }

    // Resolves element names against a frame; nullopt after reporting a problem.
    std::optional<EventMask> resolve(const DomainDecl& dom, const std::vector<std::string>& names, SourceLoc loc) {
        std::uint32_t bits = 0;
        bool ok = true;
        std::set<std::string> seen;
        for (const auto& n : names) {
            if (!seen.insert(n).second) {
                note(diag::duplicate_element, "element " + n + " listed twice", loc);
                ok = false;
                continue;
            }
            auto it = std::find(dom.elements.begin(), dom.elements.end(), n);
            auto idx = it - dom.elements.begin();
            if (it == dom.elements.end() || idx >= static_cast<long>(max_frame_size)) {
                note(diag::unknown_element, "domain " + dom.id + " has no element " + n, loc);
                ok = false;
                continue;
            }
            bits |= 1u << idx;
        }
        if (!ok)
            return std::nullopt;
        return EventMask(bits);
    }

    ParseResult assemble() {
        ParseResult out;
        CaLProgram& p = out.program;
        detail::ProgramLocs locs;

        p.domains = domains_;
        locs.domains = domain_locs_;
        locs.masses.resize(p.domains.size());
        locs.dropped_masses.assign(p.domains.size(), false);
        auto domain_index = [&](const std::string& id) -> long {
            for (std::size_t i = 0; i < p.domains.size(); ++i)
                if (p.domains[i].id == id)
                    return static_cast<long>(i);
            return -1;
        };

        for (const auto& m : masses_) {
            long d = domain_index(m.domain);
            if (d < 0) {
                note(diag::unknown_domain, "mass for undeclared domain " + m.domain, m.loc);
                continue;
            }
            if (auto ev = resolve(p.domains[d], m.elements, m.loc)) {
                p.domains[d].masses.push_back({*ev, m.mass});
                locs.masses[d].push_back(m.loc);
            } else {
                locs.dropped_masses[d] = true;
            }
        }

        p.prob_facts = facts_;
        locs.prob_facts = fact_locs_;

        for (const auto& rr : rules_) {
            Rule r;
            r.head = rr.head;
            bool ok = true;
            for (const auto& rl : rr.body) {
                BodyLiteral l;
                if (!rl.is_belief) {
                    l.positive = rl.positive;
                    l.atom = rl.atom;
                    r.body.push_back(std::move(l));
                    continue;
                }
                long d = domain_index(rl.domain);
                if (d < 0) {
                    note(diag::unknown_domain, "belief literal uses undeclared domain " + rl.domain, rl.loc);
                    ok = false;
                    continue;
                }
                auto ev = resolve(p.domains[d], rl.elements, rl.loc);
                if (!ev) {
                    ok = false;
                    continue;
                }
                const auto n = static_cast<unsigned>(std::min<std::size_t>(p.domains[d].elements.size(), max_frame_size));
                l.kind = LiteralKind::belief;
                l.positive = true;
                l.belief = {rl.domain, rl.positive ? *ev : EventMask::full(n) - *ev};
                r.body.push_back(std::move(l));
            }
            if (ok) {
                p.rules.push_back(std::move(r));
                locs.rules.push_back(rr.loc);
            }
        }

        detail::classify_literals(p);
        auto v = detail::validate(p, &locs);
        diags_.insert(diags_.end(), v.begin(), v.end());
        std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
            auto la = a.loc.value_or(SourceLoc{}), lb = b.loc.value_or(SourceLoc{});
            return std::tie(la.line, la.column) < std::tie(lb.line, lb.column);
        });
        p.normalize();
        out.diagnostics = std::move(diags_);
        return out;
    }

    Lexer lex_;
    Token cur_;
    std::optional<SyntaxError> pending_;
    int anon_ = 0;
    std::vector<Diagnostic> diags_;
    std::vector<RawRule> rules_;
    std::vector<ProbabilisticFact> facts_;
    std::vector<SourceLoc> fact_locs_;
    std::vector<DomainDecl> domains_;
    std::vector<SourceLoc> domain_locs_;
    std::vector<RawMass> masses_;
};

} // namespace

ParseResult parse_program(std::string_view text) {
    return Parser(text).run();
}

AtomParse parse_atom(std::string_view text) {
    return Parser(text).run_atom();
}

} // namespace calp
