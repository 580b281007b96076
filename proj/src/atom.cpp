#include "atomiso/atom.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>

#include "atomiso/errors.hpp"

namespace atomiso {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw ResourceError("rational overflow", 0);
  }
  return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(Wide num, Wide den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  auto g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

std::int64_t Rational::floor() const noexcept {
  auto q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::int64_t Rational::ceil() const noexcept {
  auto q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide l = Wide(a.num_) * b.den_;
  Wide r = Wide(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::parse(std::string_view text) {
  auto parse_int = [](std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
  };
  std::int64_t num = 0;
  std::int64_t den = 1;
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!parse_int(text, num)) return std::nullopt;
  } else {
    if (!parse_int(text.substr(0, slash), num)) return std::nullopt;
    auto d = text.substr(slash + 1);
    if (d.empty() || d.front() == '-' || !parse_int(d, den) || den == 0) return std::nullopt;
  }
  return Rational(num, den);
}

Rational simplest_between(const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
  const Rational zero(0);
  if (!lo && !hi) return zero;
  if (!lo) return *hi > zero ? zero : Rational(hi->ceil() - 1);
  if (!hi) return *lo < zero ? zero : Rational(lo->floor() + 1);
  if (!(*lo < *hi)) throw DomainError("empty interval (" + lo->str() + ", " + hi->str() + ")");
  if (*lo < zero && zero < *hi) return zero;
  if (*hi <= zero) return -simplest_between(-*hi, -*lo);
  // 0 <= lo < hi
  const std::int64_t next = lo->floor() + 1;
  if (Rational(next) < *hi) return Rational(next);
  const Rational k(lo->floor());
  const Rational one(1);
  std::optional<Rational> upper;
  if (*lo != k) upper = one / (*lo - k);
  const Rational y = simplest_between(one / (*hi - k), upper);
  return k + one / y;
}

std::string Atom::str() const {
  if (kind_ == Kind::Id) return "#" + std::to_string(value_.num());
  return value_.str();
}

std::optional<Atom> Atom::parse(std::string_view text) {
  if (!text.empty() && text.front() == '#') {
    auto digits = text.substr(1);
    if (digits.empty()) return std::nullopt;
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    if (n > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
    return Atom::id(n);
  }
  if (auto q = Rational::parse(text)) return Atom::rational(*q);
  return std::nullopt;
}

std::string to_string(const AtomSet& atoms, std::string_view sep) {
  std::string out;
  for (const auto& a : atoms) {
    if (!out.empty()) out += sep;
    out += a.str();
  }
  return out;
}

AtomSet parse_atom_list(std::string_view text) {
  AtomSet out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ',' || std::isspace(static_cast<unsigned char>(text[i])))) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ',' && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      auto tok = text.substr(i, j - i);
      auto atom = Atom::parse(tok);
      if (!atom) throw SyntaxError("bad atom literal '" + std::string(tok) + "'", 1, i + 1);
      out.insert(*atom);
    }
    i = j;
  }
  return out;
}

}  // namespace atomiso
