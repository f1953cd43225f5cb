#include "hitchin/surface_group.hpp"

#include <random>
#include <sstream>

#include "hitchin/representations.hpp"

namespace hitchin {

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (std::size_t i = 0; i + 1 < letters_.size(); ++i)
    if (letters_[i].gen == letters_[i + 1].gen &&
        letters_[i].exp == -letters_[i + 1].exp)
      throw Error("Word: letters are not freely reduced");
}

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    out.push_back({it->gen, -it->exp});
  return Word(std::move(out));
}

Word Word::concat(const Word& other) const {
  std::vector<Letter> all = letters_;
  all.insert(all.end(), other.letters_.begin(), other.letters_.end());
  return reduce_word(all);
}

int Word::power_order() const {
  const int len = length();
  for (int p = 1; p <= len / 2; ++p) {
    if (len % p != 0) continue;
    bool periodic = true;
    for (int i = p; i < len && periodic; ++i)
      periodic = letters_[i] == letters_[i - p];
    if (periodic) return len / p;
  }
  return 1;
}

std::string Word::to_text() const {
  std::string out;
  for (const auto& l : letters_) {
    if (!out.empty()) out += ' ';
    char base = (l.gen % 2 == 0) ? 'a' : 'b';
    if (l.exp < 0) base = static_cast<char>(base - 'a' + 'A');
    out += base;
    out += std::to_string(l.gen / 2 + 1);
  }
  return out;
}

Word Word::from_text(const std::string& text, int genus) {
  std::istringstream in(text);
  std::string tok;
  std::vector<Letter> letters;
  while (in >> tok) {
    if (tok.size() < 2) throw Error("Word token too short: " + tok);
    char c = tok[0];
    int exp = 1;
    if (c >= 'A' && c <= 'Z') {
      exp = -1;
      c = static_cast<char>(c - 'A' + 'a');
    }
    if (c != 'a' && c != 'b') throw Error("Word token must start with a/b: " + tok);
    int pair = std::stoi(tok.substr(1)) - 1;
    if (pair < 0 || pair >= genus) throw Error("Word token index out of range: " + tok);
    int gen = 2 * pair + (c == 'b' ? 1 : 0);
    letters.push_back({gen, exp});
  }
  return reduce_word(letters);
}

Word reduce_word(const std::vector<Letter>& letters) {
  std::vector<Letter> stack;
  stack.reserve(letters.size());
  for (const auto& l : letters) {
    if (l.exp != 1 && l.exp != -1) throw Error("Letter exponent must be +-1");
    if (!stack.empty() && stack.back().gen == l.gen && stack.back().exp == -l.exp)
      stack.pop_back();
    else
      stack.push_back(l);
  }
  return Word(std::move(stack));
}

std::int64_t ball_size(int genus, int radius) {
  const std::int64_t m = 4 * genus;
  std::int64_t total = 0, layer = m;
  for (int r = 1; r <= radius; ++r) {
    total += layer;
    layer *= (m - 1);
  }
  return total;
}

namespace {

// Letters in listing order: a1, A1, b1, B1, a2, ... index 2k = gen k,
// 2k+1 = its inverse.
Letter letter_from_index(int idx) {
  return Letter{idx / 2, idx % 2 == 0 ? 1 : -1};
}

}  // namespace

Ball ball(int genus, int radius, std::int64_t cap) {
  if (genus < 2) throw Error("ball: genus must be >= 2");
  if (radius < 1) throw Error("ball: radius must be >= 1");
  const std::int64_t total = ball_size(genus, radius);
  if (total > cap)
    throw BallTooLarge("ball of radius " + std::to_string(radius) + " has " +
                       std::to_string(total) + " words (cap " + std::to_string(cap) +
                       "); use sample_words instead");
  Ball b;
  b.genus = genus;
  b.radius = radius;
  b.words.reserve(total);
  const int m = 4 * genus;
  std::vector<Word> frontier;
  for (int i = 0; i < m; ++i) frontier.push_back(Word({letter_from_index(i)}));
  for (int r = 1; r <= radius; ++r) {
    b.words.insert(b.words.end(), frontier.begin(), frontier.end());
    if (r == radius) break;
    std::vector<Word> next;
    next.reserve(frontier.size() * (m - 1));
    for (const auto& w : frontier) {
      const Letter last = w.letters().back();
      for (int i = 0; i < m; ++i) {
        Letter l = letter_from_index(i);
        if (l.gen == last.gen && l.exp == -last.exp) continue;
        auto letters = w.letters();
        letters.push_back(l);
        next.push_back(Word(std::move(letters)));
      }
    }
    frontier = std::move(next);
  }
  return b;
}

std::vector<Word> sample_words(int genus, int length, int count, std::uint64_t seed) {
  if (genus < 2) throw Error("sample_words: genus must be >= 2");
  if (length < 1) throw Error("sample_words: length must be >= 1");
  std::mt19937_64 rng(seed);
  const int m = 4 * genus;
  std::uniform_int_distribution<int> first(0, m - 1);
  std::uniform_int_distribution<int> rest(0, m - 2);
  std::vector<Word> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    std::vector<Letter> letters;
    letters.push_back(letter_from_index(first(rng)));
    for (int i = 1; i < length; ++i) {
      const Letter last = letters.back();
      const int banned = 2 * last.gen + (last.exp == 1 ? 1 : 0);
      int pick = rest(rng);
      if (pick >= banned) ++pick;
      letters.push_back(letter_from_index(pick));
    }
    out.push_back(Word(std::move(letters)));
  }
  return out;
}

Eigen::MatrixXd evaluate(const Word& w, const SurfaceRep& rep) {
  const int n = rep.n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (const auto& l : w.letters()) {
    if (l.gen < 0 || l.gen >= 2 * rep.genus)
      throw Error("evaluate: generator index out of range for genus");
    const Eigen::MatrixXd& g = rep.generators.at(l.gen);
    if (l.exp == 1)
      m = m * g;
    else
      m = m * g.inverse();
  }
  return m;
}

}  // namespace hitchin
