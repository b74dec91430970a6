#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "stablerun/program.hpp"

namespace stablerun {

namespace detail {

struct Token {
    enum class Kind { Ident, Numeral, Arrow, LParen, RParen, Comma, Semi, Dot, Hash, Slash, End };
    Kind kind;
    std::string text;
    int line, column;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_space();
        int line = line_, col = col_;
        if (pos_ >= src_.size())
            return {Token::Kind::End, "", line, col};
        char ch = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            std::string word;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                word.push_back(advance());
            return {Token::Kind::Ident, word, line, col};
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::string word;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                word.push_back(advance());
            return {Token::Kind::Numeral, word, line, col};
        }
        switch (ch) {
            case ':':
                advance();
                if (pos_ < src_.size() && src_[pos_] == '-') {
                    advance();
                    return {Token::Kind::Arrow, ":-", line, col};
                }
                throw SyntaxError("expected ':-'", line, col);
            case '(': advance(); return {Token::Kind::LParen, "(", line, col};
            case ')': advance(); return {Token::Kind::RParen, ")", line, col};
            case ',': advance(); return {Token::Kind::Comma, ",", line, col};
            case ';': advance(); return {Token::Kind::Semi, ";", line, col};
            case '.': advance(); return {Token::Kind::Dot, ".", line, col};
            case '#': advance(); return {Token::Kind::Hash, "#", line, col};
            case '/': advance(); return {Token::Kind::Slash, "/", line, col};
            default:
                throw SyntaxError(std::string("unexpected character '") + ch + "'", line, col);
        }
    }

private:
    char advance() {
        char ch = src_[pos_++];
        if (ch == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return ch;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char ch = src_[pos_];
            if (ch == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

}  // namespace detail

/// Parses the textual clause format:
///
///   head :- lit, ..., lit.        rules
///   head.                         facts
///   not atom                      negative body literal
///   p(X;Y;Z)                      body sugar for p(X), p(Y), p(Z)
///   #intensional name/arity.      forces a predicate intensional
///   % ...                         comment to end of line
///
/// Constants are lowercase identifiers, numerals, or the blank symbol "B";
/// any other uppercase-initial identifier is a variable. Predicates are
/// identified by name and arity, so state/1 and state/2 may coexist.
inline Program parse_program(const std::string& text) {
    using detail::Token;
    detail::Lexer lexer(text);
    Token tok = lexer.next();
    auto bump = [&]() { tok = lexer.next(); };
    auto expect = [&](Token::Kind k, const char* what) {
        if (tok.kind != k)
            throw SyntaxError(std::string("expected ") + what, tok.line, tok.column);
        Token t = tok;
        bump();
        return t;
    };

    // Parsed atom before pooling expansion: each argument slot is a list of
    // term alternatives (singleton unless the slot was pooled).
    struct RawAtom {
        std::string name;
        std::vector<std::vector<Term>> arg_alternatives;
        bool pooled = false;
        int line, column;
    };

    auto parse_term = [&]() -> Term {
        if (tok.kind == Token::Kind::Numeral) {
            Term t = Term::constant(tok.text);
            bump();
            return t;
        }
        if (tok.kind == Token::Kind::Ident) {
            std::string name = tok.text;
            bump();
            // "B" is the conventional blank-tape constant; all other
            // uppercase-initial identifiers are variables.
            if (std::isupper(static_cast<unsigned char>(name[0])) && name != "B")
                return Term::variable(name);
            return Term::constant(name);
        }
        throw SyntaxError("expected a term", tok.line, tok.column);
    };

    auto parse_raw_atom = [&]() -> RawAtom {
        if (tok.kind != Token::Kind::Ident)
            throw SyntaxError("expected an atom", tok.line, tok.column);
        RawAtom raw;
        raw.name = tok.text;
        raw.line = tok.line;
        raw.column = tok.column;
        bump();
        if (tok.kind != Token::Kind::LParen)
            return raw;
        bump();
        bool first_slot = true;
        while (true) {
            std::vector<Term> alts;
            alts.push_back(parse_term());
            while (tok.kind == Token::Kind::Semi) {
                bump();
                alts.push_back(parse_term());
            }
            if (alts.size() > 1) {
                if (!first_slot || raw.pooled)
                    throw SyntaxError("pooling cannot be mixed with ','", raw.line, raw.column);
                raw.pooled = true;
            }
            raw.arg_alternatives.push_back(std::move(alts));
            first_slot = false;
            if (tok.kind == Token::Kind::Comma) {
                if (raw.pooled)
                    throw SyntaxError("pooling cannot be mixed with ','", raw.line, raw.column);
                bump();
                continue;
            }
            break;
        }
        expect(Token::Kind::RParen, "')'");
        return raw;
    };

    auto plain_atom = [](const RawAtom& raw) {
        Atom a;
        a.pred = raw.name;
        for (const std::vector<Term>& alts : raw.arg_alternatives)
            a.args.push_back(alts.front());
        return a;
    };

    std::vector<Clause> clauses;
    std::set<Predicate> forced_intensional;
    while (tok.kind != Token::Kind::End) {
        if (tok.kind == Token::Kind::Hash) {
            bump();
            Token kw = expect(Token::Kind::Ident, "directive name");
            if (kw.text != "intensional")
                throw SyntaxError("unknown directive #" + kw.text, kw.line, kw.column);
            Token name = expect(Token::Kind::Ident, "predicate name");
            expect(Token::Kind::Slash, "'/'");
            Token arity = expect(Token::Kind::Numeral, "arity");
            expect(Token::Kind::Dot, "'.'");
            forced_intensional.insert(Predicate{name.text, std::stoi(arity.text)});
            continue;
        }
        RawAtom head = parse_raw_atom();
        if (head.pooled)
            throw SyntaxError("pooling is only allowed in clause bodies", head.line,
                              head.column);
        Clause cl(plain_atom(head));
        if (tok.kind == Token::Kind::Arrow) {
            bump();
            while (true) {
                bool negated = false;
                if (tok.kind == Token::Kind::Ident && tok.text == "not") {
                    negated = true;
                    bump();
                }
                RawAtom raw = parse_raw_atom();
                if (raw.pooled) {
                    if (negated)
                        throw SyntaxError("pooling is not allowed under 'not'", raw.line,
                                          raw.column);
                    for (const Term& t : raw.arg_alternatives.front())
                        cl.body.push_back(Literal{Atom{raw.name, {t}}, false});
                } else {
                    cl.body.push_back(Literal{plain_atom(raw), negated});
                }
                if (tok.kind == Token::Kind::Comma) {
                    bump();
                    continue;
                }
                break;
            }
        }
        expect(Token::Kind::Dot, "'.'");
        clauses.push_back(std::move(cl));
    }
    return Program(std::move(clauses), std::move(forced_intensional));
}

}  // namespace stablerun
