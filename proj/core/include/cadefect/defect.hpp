#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cadefect/spectral.hpp"
#include "cadefect/subshift.hpp"
#include "cadefect/symbolic.hpp"

namespace cadefect::defect {

using spectral::Displacement;
using spectral::DisplacementGroup;
using symbolic::CyclicConfig;
using symbolic::EpConfig;
using symbolic::Grid2D;
using symbolic::Word;

inline constexpr int kInfinite = INT_MAX;

// F over the cells lo..lo+|values|-1. -1 marks a cell whose own symbol is
// inadmissible. When capped, a value equal to cap means "at least cap".
struct DefectField1D {
  std::int64_t lo = 0;
  std::vector<int> values;
  bool capped = false;
  int cap = kInfinite;

  std::int64_t hi() const { return lo + static_cast<std::int64_t>(values.size()) - 1; }
  int at(std::int64_t z) const { return values.at(static_cast<std::size_t>(z - lo)); }
  bool bounded(int v) const { return v != kInfinite && !(capped && v >= cap); }
};

struct DefectField2D {
  int width = 0;
  int height = 0;
  std::vector<int> values;  // row-major, y = 0 bottom
  int cap = 0;

  int at(int x, int y) const { return values.at(static_cast<std::size_t>(y) * width + x); }
  bool bounded(int v) const { return v < cap; }
};

// Exact on eventually periodic configurations (kInfinite iff c lies in x).
int field_value(const EpConfig& c, const subshift::Subshift1D& x, std::int64_t z);
DefectField1D defect_field(const EpConfig& c, const subshift::Subshift1D& x, std::int64_t lo, std::int64_t hi);
DefectField1D defect_field(const CyclicConfig& c, const subshift::Subshift1D& x);
// Windows are clipped to the grid; values are capped at max(width, height).
DefectField2D defect_field(const Grid2D& g, const subshift::Shift2D& x);

// Plateau-inclusive local minima among bounded values.
std::vector<std::int64_t> defect_set(const DefectField1D& f);
std::vector<std::pair<int, int>> defect_set(const DefectField2D& f);

// Cells of the cyclic configuration whose (2r+1)-window is admissible.
std::vector<char> unflawed_mask(const CyclicConfig& c, const subshift::Subshift1D& x, int r);

struct Domain {
  std::int64_t lo = 0;  // inclusive extent; ignored on an unbounded side
  std::int64_t hi = 0;
  bool unbounded_left = false;
  bool unbounded_right = false;
  bool projective = false;
  int component = -1;  // transitive component, -1 if not unique
  std::int64_t base = 0;
  std::optional<Displacement> label;
};

struct DomainDecomposition {
  int r = 0;
  std::vector<Domain> domains;  // left to right
};

// Default range: max(radius + 1, max F over the defect set + 1).
int default_range(const EpConfig& c, const subshift::Subshift1D& x);
DomainDecomposition domain_components(const EpConfig& c, const subshift::Subshift1D& x, int r,
                                      const spectral::DomainLabeller* labeller = nullptr);

enum class Kind { none, interface, dislocation, marker_dislocation, unclassified };
std::string kind_name(Kind k);

struct DefectReport {
  int r = 0;
  std::vector<std::int64_t> defect_set;
  DomainDecomposition decomposition;
  Kind kind = Kind::none;
  std::vector<std::string> signature;  // component names of the projective domains, left to right
  std::optional<DisplacementGroup> group;
  std::optional<Displacement> displacement;            // left projective minus right projective
  std::vector<std::vector<Displacement>> matrix;       // over all labelled domains, when one class
  bool essential = false;
  bool removable = true;
};

// r <= 0 selects default_range.
DefectReport classify(const EpConfig& c, const subshift::Subshift1D& x, const spectral::DomainLabeller& labeller,
                      int r = 0);

// Displacement across a junction: last state of the left domain, first state of
// the right domain, and the number of cells between them.
std::int64_t phase_gap(const subshift::Subshift1D& x, int left_state, int right_state, std::int64_t gap);

// Whether some finite modification of c lies in x.
bool is_removable(const EpConfig& c, const subshift::Subshift1D& x);

struct Domain2D {
  std::vector<std::pair<int, int>> cells;
  int component = -1;  // periodic-pattern orbit
  std::optional<Displacement> label;
};

struct Report2D {
  int r = 0;
  std::vector<Domain2D> domains;  // topmost first
  std::optional<DisplacementGroup> group;
  std::vector<std::vector<Displacement>> matrix;
  Kind kind = Kind::none;
};

// Stabilizer lattice of a periodic tile, as a planar group.
DisplacementGroup periodicity_group(const Grid2D& tile);
// Lagrange-Gauss reduced basis of the group's lattice.
std::vector<Displacement> reduced_basis(const DisplacementGroup& g);

// r <= 0 selects 1.
Report2D classify2d(const Grid2D& g, const subshift::Shift2D& x, int r = 0, int box = 2);

}  // namespace cadefect::defect
