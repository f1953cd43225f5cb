#include <doctest.h>

#include <set>

#include "hitchin/surface_group.hpp"

using namespace hitchin;

TEST_SUITE("surface_group") {

TEST_CASE("ball counts follow the free-group formula") {
  // genus 2: 8 one-letter words, then 7 extensions per reduced word
  CHECK(ball(2, 1).words.size() == 8);
  CHECK(ball(2, 2).words.size() == 64);
  CHECK(ball_size(2, 1) == 8);
  CHECK(ball_size(2, 2) == 64);
  CHECK(ball_size(2, 3) == 456);
  CHECK(ball_size(2, 4) == 3200);
  CHECK(ball_size(2, 6) == 156864);
  const Ball b3 = ball(2, 3);
  CHECK(static_cast<std::int64_t>(b3.words.size()) == ball_size(2, 3));
  // deterministic listing, identity excluded, all reduced
  for (const auto& w : b3.words) {
    CHECK(!w.empty());
    CHECK(w == reduce_word(w.letters()));
  }
  std::set<std::string> texts;
  for (const auto& w : b3.words) texts.insert(w.to_text());
  CHECK(texts.size() == b3.words.size());
}

TEST_CASE("ball respects the cap") {
  CHECK_THROWS_AS(ball(2, 6, 1000), BallTooLarge);
}

TEST_CASE("free reduction cancels adjacent inverses") {
  // a1 a1^-1 b2 -> b2
  Word w = reduce_word({{0, 1}, {0, -1}, {3, 1}});
  CHECK(w.length() == 1);
  CHECK(w.letters()[0] == Letter{3, 1});
  // full collapse
  CHECK(reduce_word({{1, 1}, {2, 1}, {2, -1}, {1, -1}}).empty());
}

TEST_CASE("inverse and concat behave as group operations") {
  Word w = Word::from_text("a1 b1 A2 b2");
  CHECK(w.concat(w.inverse()).empty());
  CHECK(w.inverse().inverse() == w);
  Word u = Word::from_text("B2 a2");
  // (wu)^-1 = u^-1 w^-1
  CHECK(w.concat(u).inverse() == u.inverse().concat(w.inverse()));
}

TEST_CASE("text round trip") {
  const std::string text = "a1 B1 a2 A1 b2";
  Word w = Word::from_text(text);
  CHECK(w.to_text() == text);
  CHECK(Word::from_text(w.to_text()) == w);
}

TEST_CASE("power order detects proper powers") {
  Word u = Word::from_text("a1 b2");
  Word cube = u.concat(u).concat(u);
  CHECK(u.power_order() == 1);
  CHECK(cube.power_order() == 3);
  CHECK(Word::from_text("a1 b1 a2").power_order() == 1);
}

TEST_CASE("sample_words is seeded and reduced") {
  auto ws1 = sample_words(2, 10, 50, 7);
  auto ws2 = sample_words(2, 10, 50, 7);
  auto ws3 = sample_words(2, 10, 50, 8);
  CHECK(ws1.size() == 50);
  CHECK(ws1 == ws2);
  CHECK(ws1 != ws3);
  for (const auto& w : ws1) {
    CHECK(w.length() == 10);
    CHECK(w == reduce_word(w.letters()));
  }
}

}  // TEST_SUITE
