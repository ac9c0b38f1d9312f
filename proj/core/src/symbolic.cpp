#include "cadefect/symbolic.hpp"

#include <algorithm>
#include <numeric>

#include "cadefect/error.hpp"

namespace cadefect::symbolic {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t m) {
  return (a - floor_mod(a, m)) / m;
}

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error(ErrorKind::parse, "alphabet must contain at least one symbol");
  if (labels_.size() > 255) throw Error(ErrorKind::unsupported, "alphabet larger than 255 symbols");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].size() != 1) throw Error(ErrorKind::parse, "symbol labels must be single characters: '" + labels_[i] + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) throw Error(ErrorKind::parse, "duplicate symbol label '" + labels_[i] + "'");
    }
  }
}

Alphabet Alphabet::binary() { return Alphabet({"0", "1"}); }

int Alphabet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return -1;
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  w.reserve(text.size());
  for (char ch : text) {
    int idx = index_of(std::string_view(&ch, 1));
    if (idx < 0) throw Error(ErrorKind::parse, std::string("symbol '") + ch + "' not in alphabet");
    w.push_back(static_cast<Symbol>(idx));
  }
  return w;
}

std::string Alphabet::format(const Word& w) const {
  std::string s;
  s.reserve(w.size());
  for (Symbol x : w) s += labels_.at(x);
  return s;
}

std::size_t primitive_period(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return d;
  }
  return n;
}

Word rotate(const Word& w, std::int64_t k) {
  const auto n = static_cast<std::int64_t>(w.size());
  Word out(w.size());
  for (std::int64_t i = 0; i < n; ++i) out[i] = w[floor_mod(i + k, n)];
  return out;
}

Symbol EpConfig::at(std::int64_t z) const {
  if (z < anchor) return left[floor_mod(z - anchor, static_cast<std::int64_t>(left.size()))];
  const std::int64_t e = end();
  if (z < e) return center[z - anchor];
  return right[floor_mod(z - e, static_cast<std::int64_t>(right.size()))];
}

EpConfig make_periodic(const Word& period, std::int64_t anchor) {
  if (period.empty()) throw Error(ErrorKind::invalid_argument, "periodic word must be nonempty");
  return EpConfig{period, {}, period, anchor};
}

Word window(const EpConfig& c, std::int64_t lo, std::int64_t hi) {
  Word w;
  if (hi < lo) return w;
  w.reserve(hi - lo + 1);
  for (std::int64_t z = lo; z <= hi; ++z) w.push_back(c.at(z));
  return w;
}

EpConfig shift(const EpConfig& c, std::int64_t v) {
  EpConfig out = c;
  out.anchor = c.anchor - v;
  return out;
}

EpConfig normalize(const EpConfig& c) {
  if (c.left.empty() || c.right.empty()) throw Error(ErrorKind::invalid_argument, "configuration tails must be nonempty");
  EpConfig out;
  out.left.assign(c.left.begin(), c.left.begin() + primitive_period(c.left));
  out.right.assign(c.right.begin(), c.right.begin() + primitive_period(c.right));
  out.anchor = c.anchor;
  std::size_t lo = 0;
  std::size_t hi = c.center.size();
  while (hi > lo && c.center[hi - 1] == out.right.back()) {
    out.right = rotate(out.right, -1);
    --hi;
  }
  while (lo < hi && c.center[lo] == out.left.front()) {
    out.left = rotate(out.left, 1);
    ++lo;
  }
  out.center.assign(c.center.begin() + lo, c.center.begin() + hi);
  out.anchor = c.anchor + static_cast<std::int64_t>(lo);
  return out;
}

bool read_equal(const EpConfig& a, const EpConfig& b) {
  const auto lcm_left = std::lcm<std::int64_t>(a.left.size(), b.left.size());
  const auto lcm_right = std::lcm<std::int64_t>(a.right.size(), b.right.size());
  const std::int64_t lo = std::min(a.anchor, b.anchor) - lcm_left;
  const std::int64_t hi = std::max(a.end(), b.end()) + lcm_right;
  for (std::int64_t z = lo; z <= hi; ++z) {
    if (a.at(z) != b.at(z)) return false;
  }
  return true;
}

Word window(const CyclicConfig& c, std::int64_t lo, std::int64_t hi) {
  Word w;
  if (hi < lo) return w;
  w.reserve(hi - lo + 1);
  for (std::int64_t z = lo; z <= hi; ++z) w.push_back(c.at(z));
  return w;
}

}  // namespace cadefect::symbolic
