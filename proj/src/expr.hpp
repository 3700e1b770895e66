#pragma once

// Small recursive-descent parser shared by the element and polynomial text formats.
// Grammar: expr := ['-'] term (('+'|'-') term)* ; term := power ('*' power)* ;
//          power := atom ['^' integer] ; atom := integer | name | '(' expr ')'

#include "pnpair/arith.hpp"
#include "pnpair/error.hpp"

#include <cctype>
#include <string>

namespace pnp::detail {

template <class Alg>
class ExprParser {
public:
    using V = typename Alg::Value;

    ExprParser(const Alg& alg, const std::string& text) : alg_(alg), s_(text) {}

    V parse() {
        V v = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void error(const std::string& msg) const {
        fail(Errc::InputError, "cannot parse '" + s_ + "': " + msg);
    }

    V expr() {
        V v = eat('-') ? alg_.neg(term()) : term();
        for (;;) {
            if (eat('+')) v = alg_.add(v, term());
            else if (eat('-')) v = alg_.sub(v, term());
            else return v;
        }
    }
    V term() {
        V v = power();
        while (eat('*')) v = alg_.mul(v, power());
        return v;
    }
    V power() {
        V b = atom();
        if (eat('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) error("exponent must be a nonnegative integer");
            b = alg_.pow(b, std::stoul(s_.substr(start, pos_ - start)));
        }
        return b;
    }
    V atom() {
        skip();
        if (pos_ >= s_.size()) error("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            V v = expr();
            if (!eat(')')) error("missing ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return alg_.integer(BigInt(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            auto v = alg_.symbol(name);
            if (!v) error("unknown symbol '" + name + "'");
            return *v;
        }
        error("unexpected '" + std::string(1, c) + "'");
    }

    const Alg& alg_;
    const std::string& s_;
    std::size_t pos_ = 0;
};

template <class Alg>
typename Alg::Value parse_with(const Alg& alg, const std::string& text) {
    return ExprParser<Alg>(alg, text).parse();
}

} // namespace pnp::detail
