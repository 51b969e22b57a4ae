#include "chw/expr.hpp"

#include <cctype>

namespace chw {

namespace {

class Parser {
public:
    Parser(const std::string& s, const RingPtr& r) : s_(s), r_(r) {}

    Form run() {
        Form f = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw InvalidInput("cannot parse \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + msg);
    }
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
    bool eat_wedge() {
        skip();
        if (s_.compare(pos_, 3, "\u2227") == 0) {
            pos_ += 3;
            return true;
        }
        return false;
    }
    std::string ident() {
        skip();
        size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(b, pos_ - b);
    }

    Form expr() {
        Form acc;
        bool neg = eat('-');
        if (!neg) eat('+');
        acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }

    Form term() {
        Form acc = power();
        while (true) {
            if (eat('*') || eat_wedge())
                acc = acc * power();
            else if (eat('/')) {
                size_t at = pos_;
                Form d = power();
                if (d.is_zero() || d.terms().size() != 1 || !(d.terms()[0].k == FKey{})) {
                    pos_ = at;
                    fail("division only by nonzero constants");
                }
                acc *= d.terms()[0].c.inv();
            } else
                return acc;
        }
    }

    Form power() {
        Form b = atom();
        if (eat('^')) {
            skip();
            size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (st == pos_) fail("expected exponent");
            int n = std::stoi(s_.substr(st, pos_ - st));
            Form r = Form::scalar(r_, 1);
            for (int k = 0; k < n; ++k) r = r * b;
            return r;
        }
        return b;
    }

    Form atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Form f = expr();
            if (!eat(')')) fail("expected ')'");
            return f;
        }
        if (c == '-') {
            ++pos_;
            return -power();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Form::scalar(r_, Scalar(mpq_class(s_.substr(st, pos_ - st))));
        }
        std::string id = ident();
        if (id.empty()) fail("unexpected '" + std::string(1, c) + "'");
        if (id == "i") return Form::scalar(r_, Scalar::i());
        if (id == "d") {
            if (!eat('(')) fail("expected '(' after d");
            std::string v = ident();
            int k = r_->var_index(v);
            if (k < 0) fail("unknown variable '" + v + "'");
            if (!eat(')')) fail("expected ')'");
            return Form::dx(r_, k);
        }
        if (id == "u") return Form::upow(r_, 1);
        int k = r_->var_index(id);
        // printed form dx for d(x)
        if (k < 0 && id.size() > 1 && id[0] == 'd' && r_->var_index(id.substr(1)) >= 0)
            return Form::dx(r_, r_->var_index(id.substr(1)));
        if (k < 0) fail("unknown variable '" + id + "'");
        return Form(RingElement::var(r_, k));
    }

    const std::string& s_;
    RingPtr r_;
    size_t pos_ = 0;
};

}  // namespace

Form parse_form(const std::string& s, const RingPtr& ring) {
    Form f = Parser(s, ring).run();
    if (!f.ring()) return Form::scalar(ring, 0);
    return f;
}

RingElement parse_poly(const std::string& s, const RingPtr& ring) {
    Form f = parse_form(s, ring);
    for (auto& t : f.terms())
        if (t.k.mask || t.k.u) throw InvalidInput("\"" + s + "\" is not a polynomial");
    return f.coeff(0, 0);
}

}  // namespace chw
