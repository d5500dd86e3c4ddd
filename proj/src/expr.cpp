#include "krlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace krlab {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    double parse() {
        const double v = expression();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("expression '" + std::string(text_) + "': " + why +
                                    " at offset " + std::to_string(pos_));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool accept_word(std::string_view word) {
        skip_space();
        if (text_.substr(pos_, word.size()) != word) {
            return false;
        }
        const std::size_t end = pos_ + word.size();
        if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
            return false;
        }
        pos_ = end;
        return true;
    }

    double expression() {
        double v = term();
        for (;;) {
            if (accept('+')) {
                v += term();
            } else if (accept('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term() {
        double v = unary();
        for (;;) {
            if (accept('*')) {
                v *= unary();
            } else if (accept('/')) {
                const double d = unary();
                if (d == 0.0) {
                    fail("division by zero");
                }
                v /= d;
            } else {
                return v;
            }
        }
    }

    double unary() {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return primary();
    }

    double primary() {
        if (accept('(')) {
            const double v = expression();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return v;
        }
        if (accept_word("pi")) {
            return std::numbers::pi;
        }
        if (accept_word("sqrt")) {
            if (!accept('(')) {
                fail("expected '(' after sqrt");
            }
            const double v = expression();
            if (!accept(')')) {
                fail("expected ')'");
            }
            if (v < 0.0) {
                fail("sqrt of a negative value");
            }
            return std::sqrt(v);
        }
        return number();
    }

    double number() {
        skip_space();
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        if (begin == end || !(std::isdigit(static_cast<unsigned char>(*begin)) || *begin == '.')) {
            fail("expected a number");
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(begin, end, v, std::chars_format::general);
        if (ec != std::errc()) {
            fail("malformed number");
        }
        pos_ += static_cast<std::size_t>(ptr - begin);
        return v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

double evaluate_expression(std::string_view text) { return Parser(text).parse(); }

}  // namespace krlab
