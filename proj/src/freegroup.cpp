#include "sofic/freegroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sofic {

namespace {

std::vector<int> reduce(int rank, const std::vector<int>& letters) {
  std::vector<int> out;
  out.reserve(letters.size());
  for (int a : letters) {
    if (a == 0 || std::abs(a) > rank) {
      throw std::invalid_argument("generator index out of range");
    }
    if (!out.empty() && out.back() == -a) {
      out.pop_back();
    } else {
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace

Word::Word(int rank, std::vector<int> letters) : letters_(reduce(rank, letters)) {}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    w.letters_.push_back(-*it);
  }
  return w;
}

Word Word::operator*(const Word& other) const {
  Word w;
  w.letters_ = letters_;
  for (int a : other.letters_) {
    if (!w.letters_.empty() && w.letters_.back() == -a) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(a);
    }
  }
  return w;
}

std::strong_ordering Word::operator<=>(const Word& other) const {
  if (letters_.size() != other.letters_.size()) {
    return letters_.size() <=> other.letters_.size();
  }
  return letters_ <=> other.letters_;
}

Word reduce_word(int rank, const std::vector<int>& letters) {
  return Word(rank, letters);
}

std::vector<Word> ball(int rank, int radius) {
  if (rank < 1 || radius < 0) {
    throw std::invalid_argument("ball: rank >= 1 and radius >= 0 required");
  }
  std::vector<Word> result{Word::identity()};
  std::vector<Word> frontier{Word::identity()};
  for (int len = 1; len <= radius; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      int last = w.letters().empty() ? 0 : w.letters().back();
      for (int g = -rank; g <= rank; ++g) {
        if (g == 0 || g == -last) continue;
        Word ext = w * Word::generator(g);
        next.push_back(ext);
      }
    }
    result.insert(result.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::size_t ball_size_formula(int rank, int radius) {
  std::size_t total = 1;
  std::size_t layer = 2 * static_cast<std::size_t>(rank);
  for (int k = 1; k <= radius; ++k) {
    total += layer;
    layer *= 2 * static_cast<std::size_t>(rank) - 1;
  }
  return total;
}

}  // namespace sofic
