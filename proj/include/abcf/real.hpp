#pragma once

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <variant>

#include "surd.hpp"

namespace abcf {

struct Infinity {
    friend bool operator==(Infinity, Infinity) { return true; }
};

// A Surd, a double, or the single projective point at infinity.
class ExtendedReal {
public:
    ExtendedReal() : v_(Surd()) {}
    ExtendedReal(int n) : v_(Surd(n)) {}
    ExtendedReal(long long n) : v_(Surd(n)) {}
    ExtendedReal(long n) : v_(Surd(static_cast<long long>(n))) {}
    ExtendedReal(const Surd& s) : v_(s) {}
    ExtendedReal(Surd&& s) : v_(std::move(s)) {}
    ExtendedReal(Infinity) : v_(Infinity{}) {}
    ExtendedReal(double x)
    {
        if (std::isnan(x))
            throw Error(Errc::domain_error, "NaN");
        if (std::isinf(x))
            v_ = Infinity{};
        else
            v_ = x;
    }

    static ExtendedReal inf() { return ExtendedReal(Infinity{}); }
    static ExtendedReal rational(long long p, long long q) { return Surd::rational(p, q); }

    bool is_inf() const { return std::holds_alternative<Infinity>(v_); }
    bool is_exact() const { return std::holds_alternative<Surd>(v_); }
    bool is_float() const { return std::holds_alternative<double>(v_); }
    bool is_rational() const { return is_exact() && surd().is_rational(); }

    const Surd& surd() const { return std::get<Surd>(v_); }

    double to_double() const
    {
        if (is_exact())
            return surd().to_double();
        if (is_float())
            return std::get<double>(v_);
        return std::numeric_limits<double>::infinity();
    }

    // field radicand of an exact value (0 for rationals and non-exact values)
    long long field() const { return is_exact() ? surd().d() : 0; }

    int sign() const
    {
        require_finite("sign");
        if (is_exact())
            return surd().sign();
        double x = std::get<double>(v_);
        return x < 0 ? -1 : (x > 0 ? 1 : 0);
    }

    bool is_zero() const { return !is_inf() && sign() == 0; }

    bigint floor() const
    {
        if (is_inf())
            throw Error(Errc::undefined_floor, "floor of infinity");
        if (is_exact())
            return surd().floor();
        double f = std::floor(std::get<double>(v_));
        if (std::fabs(f) < 9.0e18)
            return bigint(static_cast<long long>(f));
        return bigint(f);
    }

    friend ExtendedReal operator-(const ExtendedReal& x)
    {
        if (x.is_inf())
            return x;
        if (x.is_exact())
            return -x.surd();
        return -std::get<double>(x.v_);
    }

    friend ExtendedReal operator+(const ExtendedReal& x, const ExtendedReal& y)
    {
        if (x.is_inf() || y.is_inf()) {
            if (x.is_inf() && y.is_inf())
                throw Error(Errc::domain_error, "inf + inf");
            return inf();
        }
        if (x.is_exact() && y.is_exact())
            return x.surd() + y.surd();
        return x.to_double() + y.to_double();
    }

    friend ExtendedReal operator-(const ExtendedReal& x, const ExtendedReal& y) { return x + (-y); }

    friend ExtendedReal operator*(const ExtendedReal& x, const ExtendedReal& y)
    {
        if (x.is_inf() || y.is_inf()) {
            if ((!x.is_inf() && x.is_zero()) || (!y.is_inf() && y.is_zero()))
                throw Error(Errc::domain_error, "0 * inf");
            return inf();
        }
        if (x.is_exact() && y.is_exact())
            return x.surd() * y.surd();
        return x.to_double() * y.to_double();
    }

    friend ExtendedReal operator/(const ExtendedReal& x, const ExtendedReal& y)
    {
        if (x.is_inf() && y.is_inf())
            throw Error(Errc::domain_error, "inf / inf");
        if (x.is_inf())
            return inf();
        if (y.is_inf())
            return ExtendedReal(0);
        if (y.is_zero()) {
            if (x.is_zero())
                throw Error(Errc::domain_error, "0 / 0");
            return inf();
        }
        if (x.is_exact() && y.is_exact())
            return x.surd() / y.surd();
        return x.to_double() / y.to_double();
    }

    // ordering of finite values; comparing with infinity is an error
    friend std::strong_ordering cmp(const ExtendedReal& x, const ExtendedReal& y)
    {
        x.require_finite("comparison");
        y.require_finite("comparison");
        if (x.is_exact() && y.is_exact())
            return Surd::compare_any(x.surd(), y.surd());
        double a = x.to_double(), b = y.to_double();
        return a < b ? std::strong_ordering::less
                     : (a > b ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend bool operator==(const ExtendedReal& x, const ExtendedReal& y)
    {
        if (x.is_inf() || y.is_inf())
            return x.is_inf() && y.is_inf();
        return cmp(x, y) == 0;
    }
    friend bool operator<(const ExtendedReal& x, const ExtendedReal& y) { return cmp(x, y) < 0; }
    friend bool operator<=(const ExtendedReal& x, const ExtendedReal& y) { return cmp(x, y) <= 0; }
    friend bool operator>(const ExtendedReal& x, const ExtendedReal& y) { return cmp(x, y) > 0; }
    friend bool operator>=(const ExtendedReal& x, const ExtendedReal& y) { return cmp(x, y) >= 0; }

    // same representation and value (used for period detection)
    bool identical(const ExtendedReal& o) const
    {
        if (v_.index() != o.v_.index())
            return false;
        if (is_inf())
            return true;
        if (is_exact())
            return surd() == o.surd();
        return std::get<double>(v_) == std::get<double>(o.v_);
    }

    std::size_t hash() const
    {
        if (is_inf())
            return 0x1234567;
        if (is_exact())
            return surd().hash();
        return std::hash<double>()(std::get<double>(v_));
    }

    std::string str() const
    {
        if (is_inf())
            return "inf";
        if (is_exact())
            return surd().str();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v_));
        std::string s = buf;
        // keep floats recognisable as floats when read back
        if (s.find_first_of(".en") == std::string::npos)
            s += ".0";
        return s;
    }

private:
    void require_finite(const char* what) const
    {
        if (is_inf())
            throw Error(Errc::domain_error, std::string(what) + " involving infinity");
    }

    std::variant<Surd, double, Infinity> v_;
};

inline ExtendedReal abs(const ExtendedReal& x) { return x.sign() < 0 ? -x : x; }

struct ExtendedRealHash {
    std::size_t operator()(const ExtendedReal& x) const { return x.hash(); }
};
struct ExtendedRealSame {
    bool operator()(const ExtendedReal& x, const ExtendedReal& y) const { return x.identical(y); }
};

// Textual syntax: integers, p/q, decimals (floats), sqrt(.), + - * /, parentheses, inf.
class RealParser {
public:
    explicit RealParser(const std::string& s) : s_(s) {}

    ExtendedReal parse()
    {
        ExtendedReal v = expr();
        skip();
        if (i_ != s_.size())
            fail("trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(Errc::parse_error, "'" + s_ + "': " + msg);
    }

    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    bool eat(char c)
    {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    ExtendedReal expr()
    {
        ExtendedReal v = term();
        for (;;) {
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                return v;
        }
    }

    ExtendedReal term()
    {
        ExtendedReal v = unary();
        for (;;) {
            if (eat('*'))
                v = v * unary();
            else if (eat('/'))
                v = v / unary();
            else
                return v;
        }
    }

    ExtendedReal unary()
    {
        if (eat('-'))
            return -unary();
        if (eat('+'))
            return unary();
        return primary();
    }

    ExtendedReal primary()
    {
        skip();
        if (eat('(')) {
            ExtendedReal v = expr();
            if (!eat(')'))
                fail("missing ')'");
            return v;
        }
        if (s_.compare(i_, 4, "sqrt") == 0) {
            i_ += 4;
            if (!eat('('))
                fail("expected '(' after sqrt");
            ExtendedReal v = expr();
            if (!eat(')'))
                fail("missing ')'");
            if (v.is_inf())
                fail("sqrt of infinity");
            if (v.is_float()) {
                if (v.to_double() < 0)
                    fail("sqrt of a negative number");
                return std::sqrt(v.to_double());
            }
            return Surd::sqrt_of(v.surd());
        }
        if (s_.compare(i_, 3, "inf") == 0) {
            i_ += 3;
            return ExtendedReal::inf();
        }
        std::size_t start = i_;
        bool is_float = false;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
            ++i_;
        if (i_ < s_.size() && s_[i_] == '.') {
            is_float = true;
            ++i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
                ++i_;
        }
        if (i_ > start && i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
            is_float = true;
            ++i_;
            if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-'))
                ++i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
                ++i_;
        }
        if (i_ == start)
            fail("expected a number");
        std::string tok = s_.substr(start, i_ - start);
        if (is_float)
            return std::stod(tok);
        return Surd(bigint(tok));
    }

    std::string s_;
    std::size_t i_ = 0;
};

inline ExtendedReal parse_real(const std::string& s) { return RealParser(s).parse(); }

inline std::string to_string(const ExtendedReal& x) { return x.str(); }

} // namespace abcf
