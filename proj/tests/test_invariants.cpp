#include <doctest.h>

#include <cstdlib>

#include "suites.hpp"

using namespace atomiso;

namespace {

std::size_t count(std::size_t fallback) {
  const char* n = std::getenv("SUITE_COUNT");
  return n ? std::strtoul(n, nullptr, 10) : fallback;
}

void expect(const suites::Tally& t, std::size_t n) {
  INFO(t.example);
  CHECK(t.instances == n);
  CHECK(t.violations == 0);
}

}  // namespace

TEST_CASE("random automorphisms are partial automorphisms") {
  std::mt19937_64 rng(3);
  for (const char* be : {"equality", "dlo", "cyclic"}) {
    const auto& b = backend(be);
    oracle::FormulaGen consts(be, 0);
    for (int i = 0; i < 300; ++i) {
      AtomSet moved, fixed;
      for (int j = 0; j < 5; ++j) {
        Atom a = std::string(be) == "equality"
                     ? Atom::id(std::uniform_int_distribution<std::uint64_t>(1, 9)(rng))
                     : Atom::rational(Rational(std::uniform_int_distribution<int>(-6, 6)(rng),
                                               std::uniform_int_distribution<int>(1, 3)(rng)));
        (j < 2 && i % 3 ? fixed : moved).insert(a);
      }
      auto pi = suites::random_automorphism(be, moved, fixed, rng);
      INFO(be << " " << suites::str(moved) << " fixing " << suites::str(fixed));
      CHECK(is_partial_automorphism(b, pi));
      for (const auto& a : fixed) CHECK(pi.at(a) == a);
      for (const auto& a : moved) CHECK(pi.count(a));
    }
  }
}

TEST_CASE("support equivariance") {
  for (const char* be : {"equality", "dlo", "cyclic"}) expect(suites::support_equivariance(be, 1, count(40)), count(40));
}

TEST_CASE("dimension is constant on orbits") {
  for (const char* be : {"equality", "dlo", "cyclic"}) expect(suites::dimension_constancy(be, 2, count(40)), count(40));
}

TEST_CASE("orbit decompositions partition the set") {
  for (const char* be : {"equality", "dlo", "cyclic"}) expect(suites::orbit_partition(be, 3, count(40)), count(40));
}

TEST_CASE("definable subsets are distinct") {
  for (const char* be : {"equality", "dlo", "cyclic"}) expect(suites::subsets_distinct(be, 4, count(20)), count(20));
}

TEST_CASE("function values are supported by the function and the argument") {
  for (const char* be : {"equality", "dlo", "cyclic"}) expect(suites::function_support(be, 5, count(40)), count(40));
}

TEST_CASE("definable functions are equivariant") {
  for (const char* be : {"equality", "dlo", "cyclic"}) expect(suites::function_equivariance(be, 6, count(40)), count(40));
}

TEST_CASE("matching search agrees with naive enumeration") {
  auto r = suites::matching_vs_naive(7, count(24));
  expect(r.tally, count(24));
  CHECK(r.found > 0);
  CHECK(r.found < r.tally.instances);
}
