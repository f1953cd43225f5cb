#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "hitchin/errors.hpp"

namespace hitchin {

struct SurfaceRep;  // representations.hpp

// One letter of a word: generator index in 0..2g-1 and exponent +-1.
struct Letter {
  int gen = 0;
  int exp = 1;
  bool operator==(const Letter&) const = default;
};

// Freely reduced word in the free group on 2g generators. Words are free:
// the surface relation is never used for rewriting.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const;
  Word concat(const Word& other) const;  // reduced product

  // Smallest word u with *this == u^k; returns k (1 when primitive).
  int power_order() const;

  // Text format: space separated a1 b1 A1 B1 ... (capital = inverse).
  std::string to_text() const;
  static Word from_text(const std::string& text, int genus = 2);

  bool operator==(const Word&) const = default;

 private:
  std::vector<Letter> letters_;
};

Word reduce_word(const std::vector<Letter>& letters);

struct Ball {
  int genus = 0;
  int radius = 0;
  std::vector<Word> words;  // deterministic order, identity excluded
};

// All freely reduced nonempty words of length <= radius. Deterministic
// listing; throws BallTooLarge beyond the cap.
Ball ball(int genus, int radius, std::int64_t cap = 200000);

std::int64_t ball_size(int genus, int radius);

// Seeded uniform sample of reduced words of exactly the given length,
// for regimes past the ball cap.
std::vector<Word> sample_words(int genus, int length, int count, std::uint64_t seed);

// Ordered product of generator images. Declared here, defined with the
// representation machinery.
Eigen::MatrixXd evaluate(const Word& w, const SurfaceRep& rep);

}  // namespace hitchin
