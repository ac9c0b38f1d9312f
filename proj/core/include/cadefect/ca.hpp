#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cadefect/subshift.hpp"
#include "cadefect/symbolic.hpp"

namespace cadefect::ca {

using symbolic::Alphabet;
using symbolic::CyclicConfig;
using symbolic::EpConfig;
using symbolic::Grid2D;
using symbolic::Symbol;
using symbolic::Word;

// Table index of a neighbourhood (a_{-R}, ..., a_R) reads it as a base-k
// number with a_{-R} most significant, so ECA tables follow Wolfram numbering.
class Ca1D {
 public:
  Ca1D() = default;
  Ca1D(Alphabet alphabet, int radius, std::vector<Symbol> table);

  static Ca1D from_eca_number(int n);
  static Ca1D identity(const Alphabet& alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  int radius() const { return radius_; }
  const std::vector<Symbol>& table() const { return table_; }

  Symbol local(const Symbol* neighbourhood) const;
  EpConfig apply(const EpConfig& c) const;
  CyclicConfig apply(const CyclicConfig& c) const;
  // Image of a finite block; |result| = |w| - 2R.
  Word apply_block(const Word& w) const;
  // One step of the periodic point w^inf, read on one period.
  Word apply_periodic(const Word& w) const;

 private:
  Alphabet alphabet_;
  int radius_ = 0;
  std::vector<Symbol> table_;
};

struct Ca2D {
  enum class Kind { table, voter, antiferro };

  Kind kind = Kind::table;
  Alphabet alphabet;
  std::vector<std::pair<int, int>> neighbourhood;  // (dx, dy)
  std::vector<Symbol> table;                       // Kind::table, first offset most significant
  // Voter: black (0) iff white fraction < theta_num / theta_den.
  std::int64_t theta_num = 1;
  std::int64_t theta_den = 2;

  static std::vector<std::pair<int, int>> moore();
  static Ca2D voter(std::int64_t num, std::int64_t den, std::vector<std::pair<int, int>> h = moore());
  static Ca2D antiferro(std::vector<std::pair<int, int>> h = moore());

  int radius() const;
  Symbol local(const Grid2D& g, int x, int y) const;
};

Grid2D apply_grid(const Ca2D& ca, const Grid2D& g);

struct InvarianceCertificate {
  bool invariant = false;
  int r = 0;
  std::size_t blocks_checked = 0;
  std::size_t distinct_images = 0;
  std::optional<Word> witness;        // first block whose image leaves A_(r)
  std::optional<Word> witness_image;
};

// Checks Phi(A_(r+R)) inside A_(r) by enumerating the factor language.
InvarianceCertificate verify_weak_invariance(const Ca1D& ca, const subshift::Subshift1D& x, int r);

struct InjectivityCertificate {
  bool injective = false;
  int r = 0;
  std::size_t blocks_checked = 0;
  std::optional<std::pair<Word, Word>> collision;
};

InjectivityCertificate check_block_injectivity(const Ca1D& ca, const subshift::Subshift1D& x, int r);

// Reference periodic point of a component: a shortest cycle through its least
// state, so position 0 carries phase 0.
Word reference_word(const subshift::Subshift1D& x, int component);

struct RestrictionAction {
  std::vector<int> image;        // phi(c)
  std::vector<int> step;         // Phi(u_c) = sigma^step u_phi(c), mod period of phi(c)
  std::vector<int> orbit_length; // m: length of the phi-orbit through c
  std::vector<int> orbit_shift;  // s: Phi^m restricted to c is sigma^s, mod period of c
};

RestrictionAction restriction_action(const Ca1D& ca, const subshift::Subshift1D& x);

}  // namespace cadefect::ca
