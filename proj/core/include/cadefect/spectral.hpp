#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cadefect/ca.hpp"
#include "cadefect/subshift.hpp"

namespace cadefect::spectral {

using symbolic::Symbol;
using symbolic::Word;

// exp(2 pi i q / P), stored as the reduced fraction q/P.
class RootOfUnity {
 public:
  RootOfUnity() = default;
  RootOfUnity(std::int64_t q, std::int64_t order);

  std::int64_t numerator() const { return q_; }
  std::int64_t order() const { return p_; }
  RootOfUnity operator*(const RootOfUnity& o) const;
  RootOfUnity inverse() const;
  RootOfUnity pow(std::int64_t e) const;
  bool operator==(const RootOfUnity& o) const { return q_ == o.q_ && p_ == o.p_; }
  std::string str() const;  // "1", "-1", or "e(q/P)"

 private:
  std::int64_t q_ = 0;
  std::int64_t p_ = 1;
};

struct PhaseStructure {
  int component = 0;
  int graph_period = 1;
  // Phases are locally readable from long enough admissible windows.
  bool locally_determined = true;
  int period = 1;            // order of the rational spectrum
  std::vector<int> phase;    // per presentation vertex, -1 outside
  std::optional<int> rotation;  // f o Phi = lambda^rotation f when phi fixes the component

  RootOfUnity lambda() const { return RootOfUnity(1, period); }
  RootOfUnity tau(const RootOfUnity& mu) const;  // lambda^q -> lambda^(rq)
  std::string tau_str() const;
};

bool phases_locally_determined(const subshift::Subshift1D& x, int component);

PhaseStructure rational_spectrum(const subshift::Subshift1D& x, int component,
                                 const ca::RestrictionAction* action = nullptr);

// Z^2 modulo a rank-2 lattice in Hermite normal form {(a, b), (0, d)}, 0 <= b < d.
// Spacetime groups act on (t, z); a == 1 means the quotient is cyclic of order d,
// which is how purely spatial Z/P is stored.
class DisplacementGroup {
 public:
  enum class Kind { spacetime, planar };
  using Vec = std::pair<std::int64_t, std::int64_t>;

  DisplacementGroup() = default;
  static DisplacementGroup cyclic(std::int64_t p);
  static DisplacementGroup from_generators(Kind kind, const std::vector<Vec>& gens);

  Kind kind() const { return kind_; }
  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  std::int64_t d() const { return d_; }
  const std::vector<Vec>& generators() const { return gens_; }
  std::vector<Vec> hnf_basis() const { return {{a_, b_}, {0, d_}}; }
  bool is_cyclic() const { return a_ == 1; }
  std::int64_t order() const { return a_ * d_; }
  std::string name() const;

  Vec reduce(Vec v) const;
  Vec add(Vec u, Vec v) const { return reduce({u.first + v.first, u.second + v.second}); }
  Vec sub(Vec u, Vec v) const { return reduce({u.first - v.first, u.second - v.second}); }
  Vec neg(Vec u) const { return reduce({-u.first, -u.second}); }
  bool equal(Vec u, Vec v) const { return reduce(u) == reduce(v); }
  // Cyclic groups print the single residue; others print "(x,y)".
  std::string format(Vec v) const;
  // Residue in Z/d for cyclic groups.
  std::int64_t cyclic_value(Vec v) const;
  bool operator==(const DisplacementGroup& o) const {
    return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_ && d_ == o.d_;
  }

 private:
  Kind kind_ = Kind::spacetime;
  std::int64_t a_ = 1;
  std::int64_t b_ = 0;
  std::int64_t d_ = 1;
  std::vector<Vec> gens_;
};

using Displacement = DisplacementGroup::Vec;

// Labels of domains in one (Phi,sigma)-transitive class of components. A domain
// that locally agrees with sigma^z u_c gets label offset(c) + (0, z), where u_c is
// the reference point of c (phase 0 at the origin).
struct DomainClass {
  std::vector<int> components;             // the phi-orbit, in orbit order
  std::vector<Displacement> offset;        // per entry of components
  DisplacementGroup group;
  bool marker = false;                     // phases come from the marker table
};

class DomainLabeller {
 public:
  DomainLabeller(const subshift::Subshift1D& x, const ca::Ca1D* ca);

  const subshift::Subshift1D& subshift() const { return *x_; }
  const std::vector<DomainClass>& classes() const { return classes_; }
  const std::optional<ca::RestrictionAction>& action() const { return action_; }
  int class_of(int component) const { return comp_class_.at(component); }
  const PhaseStructure& phases(int component) const { return ps_.at(component); }

  // Label of a domain of `component` read from window w, which starts at absolute
  // coordinate lo; base is the index in w of the base cell. Empty when the phase
  // cannot be read.
  std::optional<Displacement> label(int component, const Word& w, std::int64_t lo, std::size_t base) const;

 private:
  const subshift::Subshift1D* x_;
  std::optional<ca::RestrictionAction> action_;
  std::vector<PhaseStructure> ps_;
  std::vector<DomainClass> classes_;
  std::vector<int> comp_class_;
  std::vector<int> comp_pos_;
};

// Eigenfunction f of the component (f = lambda^phase at the origin), evaluated on any
// point whose cells lo..lo+|w|-1 read w. Uses the center cell of w.
RootOfUnity eval_eigenfunction(const subshift::Subshift1D& x, const PhaseStructure& ps, const Word& w,
                               std::int64_t lo);

// Marker eigenfunction: first occurrence of a table pattern at absolute p gives
// lambda^(phase - p). Empty when no pattern occurs.
std::optional<RootOfUnity> eval_marker_eigenfunction(const subshift::Subshift1D& x, const Word& w, std::int64_t lo);

// Phase of the state at w[i], restricted to one component; empty if not unique.
std::optional<int> phase_at(const subshift::Subshift1D& x, int component, const Word& w, std::size_t i);

}  // namespace cadefect::spectral
