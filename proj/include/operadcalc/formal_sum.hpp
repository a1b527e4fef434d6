#pragma once

#include <gmpxx.h>

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace operadcalc {

/// Exact arbitrary-precision rational; gmp keeps values in lowest terms.
using Scalar = mpq_class;

/// A finite Q-linear combination over canonically keyed basis elements
/// (trees, necklaces, words, ...). Zero coefficients are never stored.
class FormalSum {
public:
    using Terms = std::map<std::string, Scalar>;

    FormalSum() = default;

    static FormalSum basis(const std::string& key, Scalar c = Scalar(1)) {
        FormalSum s;
        s.add_term(key, c);
        return s;
    }

    void add_term(const std::string& key, const Scalar& c) {
        if (c == 0) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    FormalSum& operator+=(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    FormalSum& operator-=(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
    friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }

    FormalSum scaled(const Scalar& c) const {
        FormalSum r;
        if (c == 0) return r;
        for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
        return r;
    }
    friend FormalSum operator*(const Scalar& c, const FormalSum& a) { return a.scaled(c); }
    FormalSum operator-() const { return scaled(Scalar(-1)); }

    Scalar coeff(const std::string& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    bool operator==(const FormalSum& o) const { return terms_ == o.terms_; }
    bool operator!=(const FormalSum& o) const { return !(*this == o); }

    /// Text form `c1*KEY1 + c2*KEY2 + ...` with rational p/q coefficients.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            out += c.get_str();
            out += '*';
            out += k;
        }
        return out;
    }

    /// Parses the text form emitted by str(). A term without an explicit
    /// rational prefix is taken with coefficient 1; "0" is the zero sum.
    /// Terms are split on " + " ('+' alone is ambiguous: it occurs in keys).
    static FormalSum parse(const std::string& text) {
        FormalSum out;
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            std::size_t sep = text.find(" + ", start);
            if (sep == std::string::npos) {
                parts.push_back(text.substr(start));
                break;
            }
            parts.push_back(text.substr(start, sep - start));
            start = sep + 3;
        }
        for (auto& part : parts) {
            std::string t;
            for (char ch : part)
                if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
            if (t.empty()) throw std::invalid_argument("FormalSum: empty term in '" + text + "'");
            if (t == "0") continue;
            std::size_t i = 0;
            bool neg = false;
            if (t[i] == '+' || t[i] == '-') {
                // a leading sign is part of a coefficient only when digits follow
                if (i + 1 < t.size() && std::isdigit(static_cast<unsigned char>(t[i + 1]))) {
                    neg = (t[i] == '-');
                    ++i;
                }
            }
            std::size_t j = i;
            while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
            if (j < t.size() && t[j] == '/' && j > i) {
                std::size_t k = j + 1;
                while (k < t.size() && std::isdigit(static_cast<unsigned char>(t[k]))) ++k;
                j = k;
            }
            Scalar c(1);
            std::string key;
            if (j > i && j < t.size() && t[j] == '*') {
                c = Scalar(t.substr(i, j - i));
                if (neg) c = -c;
                key = t.substr(j + 1);
            } else {
                key = t;
            }
            if (key.empty()) throw std::invalid_argument("FormalSum: missing key in '" + part + "'");
            c.canonicalize();
            out.add_term(key, c);
        }
        return out;
    }

private:
    Terms terms_;
};

}  // namespace operadcalc
