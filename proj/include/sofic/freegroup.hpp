#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace sofic {

// Freely reduced word in F_r. Letters are signed generator indices:
// +i means a_i, -i means a_i^{-1} (1 <= i <= r). The empty word is the
// identity. Instances are reduced on construction and immutable after.
class Word {
 public:
  Word() = default;

  // Reduces the raw letter sequence. Throws std::invalid_argument on a
  // zero index or |index| > rank.
  Word(int rank, std::vector<int> letters);

  static Word identity() { return Word(); }
  static Word generator(int i) {
    Word w;
    w.letters_.push_back(i);
    return w;
  }

  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  Word inverse() const;
  // Group product (concatenate then reduce).
  Word operator*(const Word& other) const;

  bool operator==(const Word& other) const = default;
  // Length-then-lexicographic order; used as the canonical window order.
  std::strong_ordering operator<=>(const Word& other) const;

 private:
  std::vector<int> letters_;
};

Word reduce_word(int rank, const std::vector<int>& letters);

// All reduced words of length <= radius, in canonical order. Contains
// the identity and is closed under inverse.
std::vector<Word> ball(int rank, int radius);

// 1 + sum_{k=1..radius} 2r(2r-1)^(k-1)
std::size_t ball_size_formula(int rank, int radius);

}  // namespace sofic
