#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace atomiso {

/// Exact rational in lowest terms with a positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }
  std::int64_t floor() const noexcept;
  std::int64_t ceil() const noexcept;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// "p/q", or "p" for integers.
  std::string str() const;
  static std::optional<Rational> parse(std::string_view text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// The rational of smallest denominator (then smallest magnitude) strictly
/// between the bounds; a missing bound means unbounded on that side.
Rational simplest_between(const std::optional<Rational>& lo, const std::optional<Rational>& hi);

/// An element of the atom structure: a natural-number id (pure set) or a
/// rational (dense and cyclic orders).
class Atom {
 public:
  enum class Kind : std::uint8_t { Id, Rational };

  constexpr Atom() = default;
  static Atom id(std::uint64_t n) { return Atom(Kind::Id, Rational(static_cast<std::int64_t>(n))); }
  static Atom rational(Rational q) { return Atom(Kind::Rational, q); }

  Kind kind() const noexcept { return kind_; }
  const Rational& value() const noexcept { return value_; }
  std::uint64_t id_value() const noexcept { return static_cast<std::uint64_t>(value_.num()); }

  /// "#n" for ids, "p/q" or "p" for rationals.
  std::string str() const;
  static std::optional<Atom> parse(std::string_view text);

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.value_ <=> b.value_;
  }

 private:
  Atom(Kind k, Rational v) : kind_(k), value_(v) {}

  Kind kind_ = Kind::Id;
  Rational value_;
};

using AtomSet = std::set<Atom>;

std::string to_string(const AtomSet& atoms, std::string_view sep = " ");

/// Parses a comma- and/or whitespace-separated list of atom literals.
AtomSet parse_atom_list(std::string_view text);

}  // namespace atomiso

template <>
struct std::hash<atomiso::Atom> {
  std::size_t operator()(const atomiso::Atom& a) const noexcept {
    auto h = std::hash<std::int64_t>{}(a.value().num());
    h ^= std::hash<std::int64_t>{}(a.value().den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(a.kind());
  }
};
