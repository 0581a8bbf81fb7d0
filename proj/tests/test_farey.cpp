#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "geotri/errors.hpp"
#include "geotri/farey.hpp"

using namespace geotri;
using namespace geotri::farey;
using Big = boost::multiprecision::cpp_bin_float_50;

TEST_CASE("slope normalization") {
  CHECK(Slope(2, 4) == Slope(1, 2));
  CHECK(Slope(-3, -6) == Slope(1, 2));
  CHECK(Slope(3, -6) == Slope(-1, 2));
  CHECK(Slope(-5, 0) == Slope(1, 0));
  CHECK(Slope(1, 0).is_infinity());
  CHECK_THROWS_AS(Slope(0, 0), Error);
  CHECK(Slope(1, 2) < Slope(2, 3));
  CHECK(Slope(2, 1) < Slope(1, 0));
  CHECK(!(Slope(1, 0) < Slope(1, 0)));
  CHECK(Slope(-1, 1) < Slope(0, 1));
}

TEST_CASE("triangle validation") {
  CHECK_NOTHROW(FareyTriangle::base());
  CHECK_THROWS_AS(FareyTriangle(Slope(0, 1), Slope(1, 0), Slope(1, 2)), Error);
}

TEST_CASE("neighbors of the base triangle") {
  auto ns = neighbors(FareyTriangle::base());
  std::set<std::string> new_slopes;
  for (int k = 0; k < 3; k++) new_slopes.insert(ns[k].s[k].str());
  CHECK(new_slopes == std::set<std::string>{"1/2", "2/1", "-1/1"});
}

TEST_CASE("reflection is an involution") {
  std::mt19937 rng(11);
  FareyTriangle t = FareyTriangle::base();
  for (int step = 0; step < 200; step++) {
    int k = int(rng() % 3);
    auto ns = neighbors(t);
    auto back = neighbors(ns[k]);
    CHECK(back[k].same_triangle(t));
    t = ns[k];
  }
}

TEST_CASE("unimodularity to depth 12 and dual-graph treeness") {
  // BFS of the dual graph; every triple unimodular, no cycle found
  std::map<std::string, int> depth_of;
  auto key = [](const FareyTriangle& t) {
    std::array<std::string, 3> v = {t.s[0].str(), t.s[1].str(), t.s[2].str()};
    std::sort(v.begin(), v.end());
    return v[0] + ";" + v[1] + ";" + v[2];
  };
  std::vector<FareyTriangle> frontier = {FareyTriangle::base()};
  depth_of[key(frontier[0])] = 0;
  for (int d = 1; d <= 12; d++) {
    std::vector<FareyTriangle> next;
    for (const auto& t : frontier) {
      for (const auto& n : neighbors(t)) {
        for (int i = 0; i < 3; i++)
          CHECK(farey_det(n.s[i], n.s[(i + 1) % 3]) == 1);
        auto k = key(n);
        auto it = depth_of.find(k);
        if (it == depth_of.end()) {
          depth_of[k] = d;
          next.push_back(n);
        } else {
          // expanding a depth d-1 node, the only already-known neighbor a
          // tree allows is its parent at depth d-2; anything else is a cycle
          CHECK(it->second == d - 2);
        }
      }
    }
    frontier = std::move(next);
  }
  CHECK(depth_of.size() > 1000);  // trivalent tree grows exponentially
}

TEST_CASE("empty word gives a singleton path") {
  auto p = path_to_slope_limit(FareyTriangle::base(), "");
  REQUIRE(p.size() == 1);
  CHECK(p[0].same_triangle(FareyTriangle::base()));
}

TEST_CASE("RLRL word walks the Fibonacci slopes") {
  auto nodes = path(FareyTriangle::base(), "RLRLRLRLRL");
  // new slopes 2/1, 3/2, 5/3, 8/5, ... consecutive Fibonacci ratios
  long fib[16] = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987};
  for (size_t i = 1; i < nodes.size(); i++) {
    CHECK(nodes[i].new_slope == Slope(fib[i + 1], fib[i]));
  }
}

TEST_CASE("golden ratio convergents satisfy |s_k - x| < 1/q_k^2") {
  std::string word(40, ' ');
  for (int i = 0; i < 40; i++) word[i] = (i % 2 == 0) ? 'R' : 'L';
  auto nodes = path(FareyTriangle::base(), word);
  Big phi = (1 + sqrt(Big(5))) / 2;
  for (size_t i = 1; i < nodes.size(); i++) {
    const Slope& s = nodes[i].new_slope;
    Big val = Big(s.p) / Big(s.q);
    Big err = abs(val - phi);
    CHECK(err < 1 / (Big(s.q) * Big(s.q)));
  }
}

TEST_CASE("denominators eventually strictly increase along any word") {
  std::mt19937 rng(5150);
  for (int trial = 0; trial < 20; trial++) {
    std::string word;
    for (int i = 0; i < 60; i++) word += (rng() % 2) ? 'R' : 'L';
    auto nodes = path(FareyTriangle::base(), word);
    for (size_t i = 4; i + 1 < nodes.size(); i++)
      CHECK(nodes[i + 1].new_slope.q > nodes[i].new_slope.q);
  }
}

TEST_CASE("non-backtracking: a step never crosses the edge it came through") {
  std::mt19937 rng(9001);
  for (int trial = 0; trial < 20; trial++) {
    std::string word;
    for (int i = 0; i < 30; i++) word += (rng() % 2) ? 'R' : 'L';
    auto nodes = path(FareyTriangle::base(), word);
    for (size_t i = 1; i + 1 < nodes.size(); i++) {
      CHECK(!nodes[i + 1].triangle.same_triangle(nodes[i - 1].triangle));
    }
  }
}

TEST_CASE("slope vectors") {
  std::complex<double> w(0.5, 0.8);
  CHECK(std::abs(slope_vector(Slope(1, 0), w) - w) < 1e-15);
  CHECK(std::abs(slope_vector(Slope(0, 1), w) - std::complex<double>(1.0)) < 1e-15);
  // mediant linearity
  Slope a(1, 2), b(1, 3), m(2, 5);
  CHECK(std::abs(slope_vector(m, w) - slope_vector(a, w) - slope_vector(b, w)) < 1e-15);
  CHECK_THROWS_AS(slope_vector(Slope(1, 1), std::complex<double>(2.0, 0.0)), Error);
}

TEST_CASE("parsing") {
  CHECK(parse_slope("3/4") == Slope(3, 4));
  CHECK(parse_slope("-1/1") == Slope(-1, 1));
  CHECK(parse_slope("7") == Slope(7, 1));
  CHECK_THROWS_AS(parse_slope("a/b"), Error);
  auto t = parse_triangle("0/1,1/0,1/1");
  CHECK(t.same_triangle(FareyTriangle::base()));
  CHECK_THROWS_AS(parse_triangle("0/1,1/0"), Error);
  CHECK_THROWS_AS(parse_triangle("0/1,1/0,1/1,2/1"), Error);
}
