#pragma once

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "honeycomb/errors.hpp"

namespace honeycomb {

// A Schlafli-symbol term: an integer >= 3 or infinity.
class ExtendedInt {
  public:
    constexpr ExtendedInt() : value_(3) {}
    explicit ExtendedInt(int v) : value_(v) {
        if (v < 3) throw TermOutOfRange("Schlafli term must be >= 3, got " + std::to_string(v));
    }
    static constexpr ExtendedInt infinity() {
        ExtendedInt e;
        e.value_ = kInf;
        return e;
    }

    constexpr bool is_infinite() const { return value_ == kInf; }
    constexpr int value() const { return value_; }  // only meaningful when finite

    constexpr bool operator==(const ExtendedInt& o) const { return value_ == o.value_; }
    constexpr bool operator!=(const ExtendedInt& o) const { return value_ != o.value_; }

  private:
    static constexpr int kInf = -1;
    int value_;
};

// Trig of pi/n with the exact n -> infinity limits.
inline double sin_pi_over(ExtendedInt n) {
    return n.is_infinite() ? 0.0 : std::sin(std::numbers::pi / n.value());
}
inline double cos_pi_over(ExtendedInt n) {
    return n.is_infinite() ? 1.0 : std::cos(std::numbers::pi / n.value());
}

struct SchlafliSymbol {
    ExtendedInt p, q, r;

    SchlafliSymbol dual() const { return {r, q, p}; }
    bool operator==(const SchlafliSymbol& o) const { return p == o.p && q == o.q && r == o.r; }
};

enum class Geometry { Spherical, Euclidean, Hyperbolic };
enum class ElementType { Material, Ideal, Hyperideal };

inline const char* to_string(Geometry g) {
    switch (g) {
        case Geometry::Spherical: return "spherical";
        case Geometry::Euclidean: return "euclidean";
        default: return "hyperbolic";
    }
}
inline const char* to_string(ElementType t) {
    switch (t) {
        case ElementType::Material: return "material";
        case ElementType::Ideal: return "ideal";
        default: return "hyperideal";
    }
}

namespace detail {

inline ExtendedInt parse_term(std::string_view t) {
    if (t == "i" || t == "I" || t == "inf" || t == "INF" || t == "Inf" || t == "∞")
        return ExtendedInt::infinity();
    if (t.empty()) throw MalformedSymbol("empty term in Schlafli symbol");
    std::size_t i = 0;
    bool neg = false;
    if (t[0] == '-' || t[0] == '+') {
        neg = (t[0] == '-');
        i = 1;
        if (t.size() == 1) throw MalformedSymbol("bare sign in Schlafli symbol");
    }
    long v = 0;
    for (; i < t.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(t[i])))
            throw MalformedSymbol("bad term '" + std::string(t) + "' in Schlafli symbol");
        v = v * 10 + (t[i] - '0');
        if (v > 1000000) throw TermOutOfRange("Schlafli term too large");
    }
    if (neg) v = -v;
    if (v < 3) throw TermOutOfRange("Schlafli term must be >= 3, got " + std::to_string(v));
    return ExtendedInt(static_cast<int>(v));
}

}  // namespace detail

// Accepted grammars: "{p,q,r}", "p,q,r", "p-q-r"; terms are decimal integers
// >= 3 or one of "i", "inf", the infinity glyph.  Whitespace-insensitive.
inline SchlafliSymbol parse(std::string_view text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);

    if (!s.empty() && s.front() == '{') {
        if (s.back() != '}') throw MalformedSymbol("unbalanced braces in '" + std::string(text) + "'");
        s = s.substr(1, s.size() - 2);
    } else if (!s.empty() && s.back() == '}') {
        throw MalformedSymbol("unbalanced braces in '" + std::string(text) + "'");
    }
    if (s.empty()) throw MalformedSymbol("empty Schlafli symbol");

    char sep = s.find(',') != std::string::npos ? ',' : '-';
    std::vector<std::string> terms;
    std::size_t start = 0;
    // With '-' as separator a leading '-' belongs to the (invalid, negative) term.
    std::size_t scan = (sep == '-' && s[0] == '-') ? 1 : 0;
    for (std::size_t i = scan; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            terms.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    if (terms.size() != 3)
        throw MalformedSymbol("expected three terms in '" + std::string(text) + "'");
    ExtendedInt p = detail::parse_term(terms[0]);
    ExtendedInt q = detail::parse_term(terms[1]);
    ExtendedInt r = detail::parse_term(terms[2]);
    return {p, q, r};
}

inline std::string to_string(ExtendedInt n) {
    return n.is_infinite() ? std::string("inf") : std::to_string(n.value());
}

inline std::string to_string(const SchlafliSymbol& s) {
    return "{" + to_string(s.p) + "," + to_string(s.q) + "," + to_string(s.r) + "}";
}

// Compact file tag: single digit per term, 'i' for infinity ("435", "i33");
// falls back to dash-separated terms when a finite term needs several digits.
inline std::string file_tag(const SchlafliSymbol& s) {
    auto tag = [](ExtendedInt n) {
        return n.is_infinite() ? std::string("i") : std::to_string(n.value());
    };
    std::string a = tag(s.p), b = tag(s.q), c = tag(s.r);
    if (a.size() == 1 && b.size() == 1 && c.size() == 1) return a + b + c;
    return a + "-" + b + "-" + c;
}

// (p-2)(q-2) against 4, decided symbolically for infinite terms.
inline Geometry classify_2d(ExtendedInt p, ExtendedInt q) {
    if (p.is_infinite() || q.is_infinite()) return Geometry::Hyperbolic;
    long v = static_cast<long>(p.value() - 2) * (q.value() - 2);
    if (v < 4) return Geometry::Spherical;
    if (v == 4) return Geometry::Euclidean;
    return Geometry::Hyperbolic;
}

// cos(pi/q) against sin(pi/p) sin(pi/r).  Any infinite term forces the
// hyperbolic side of the comparison, so equality is never decided by floats
// there; finite terms use an absolute 1e-12 tolerance.
inline Geometry classify_3d(const SchlafliSymbol& s) {
    if (s.p.is_infinite() || s.q.is_infinite() || s.r.is_infinite()) return Geometry::Hyperbolic;
    double lhs = cos_pi_over(s.q);
    double rhs = sin_pi_over(s.p) * sin_pi_over(s.r);
    if (std::abs(lhs - rhs) <= 1e-12) return Geometry::Euclidean;
    return lhs < rhs ? Geometry::Spherical : Geometry::Hyperbolic;
}

namespace detail {

// (a-2)(b-2) against 4 with symbolic infinity handling.
inline ElementType element_type(ExtendedInt a, ExtendedInt b) {
    if (a.is_infinite() || b.is_infinite()) return ElementType::Hyperideal;
    long v = static_cast<long>(a.value() - 2) * (b.value() - 2);
    if (v < 4) return ElementType::Material;
    if (v == 4) return ElementType::Ideal;
    return ElementType::Hyperideal;
}

}  // namespace detail

inline ElementType vertex_type(const SchlafliSymbol& s) { return detail::element_type(s.r, s.q); }
inline ElementType cell_type(const SchlafliSymbol& s) { return detail::element_type(s.p, s.q); }

// Dihedral angle of the polyhedron {p,q}: 2 arcsin(cos(pi/q)/sin(pi/p)).
// Defined only when {p,q} is spherical or euclidean.
inline double dihedral_angle(ExtendedInt p, ExtendedInt q) {
    if (classify_2d(p, q) == Geometry::Hyperbolic)
        throw NotAPolyhedron("{" + to_string(p) + "," + to_string(q) + "} is not a polyhedron");
    double arg = cos_pi_over(q) / sin_pi_over(p);
    if (arg > 1.0) arg = 1.0;  // euclidean case is exactly 1 up to rounding
    return 2.0 * std::asin(arg);
}

}  // namespace honeycomb
