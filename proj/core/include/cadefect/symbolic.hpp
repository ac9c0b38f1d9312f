#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cadefect::symbolic {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

std::int64_t floor_mod(std::int64_t a, std::int64_t m);
std::int64_t floor_div(std::int64_t a, std::int64_t m);

// Labels are single printable characters so that words read as plain strings.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> labels);

  static Alphabet binary();

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(Symbol s) const { return labels_.at(s); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(std::string_view label) const;

  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

  bool operator==(const Alphabet& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
};

// Smallest d dividing |w| with w[i] == w[i mod d].
std::size_t primitive_period(const Word& w);
Word rotate(const Word& w, std::int64_t k);  // result[i] = w[(i + k) mod n]

// Eventually periodic bi-infinite sequence. Cell anchor + |center| + j reads
// right[j mod |right|]; cell z < anchor reads left[(z - anchor) mod |left|].
struct EpConfig {
  Word left;
  Word center;
  Word right;
  std::int64_t anchor = 0;

  Symbol at(std::int64_t z) const;
  std::int64_t end() const { return anchor + static_cast<std::int64_t>(center.size()); }
};

EpConfig make_periodic(const Word& period, std::int64_t anchor = 0);
Word window(const EpConfig& c, std::int64_t lo, std::int64_t hi);
EpConfig shift(const EpConfig& c, std::int64_t v);
// Primitive tails and a center trimmed of cells the tails already explain.
EpConfig normalize(const EpConfig& c);
bool read_equal(const EpConfig& a, const EpConfig& b);

struct CyclicConfig {
  Word word;

  std::size_t size() const { return word.size(); }
  Symbol at(std::int64_t z) const { return word[floor_mod(z, static_cast<std::int64_t>(word.size()))]; }
};

Word window(const CyclicConfig& c, std::int64_t lo, std::int64_t hi);

// x grows to the right, y grows upward; row y = 0 is the bottom row.
struct Grid2D {
  int width = 0;
  int height = 0;
  std::vector<Symbol> cells;

  Grid2D() = default;
  Grid2D(int w, int h, Symbol fill = 0) : width(w), height(h), cells(static_cast<std::size_t>(w) * h, fill) {}

  Symbol at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
  Symbol at_wrapped(std::int64_t x, std::int64_t y) const {
    return at(static_cast<int>(floor_mod(x, width)), static_cast<int>(floor_mod(y, height)));
  }
  void set(int x, int y, Symbol s) { cells[static_cast<std::size_t>(y) * width + x] = s; }
  bool operator==(const Grid2D& o) const { return width == o.width && height == o.height && cells == o.cells; }
};

}  // namespace cadefect::symbolic
