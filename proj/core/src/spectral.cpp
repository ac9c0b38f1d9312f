#include "cadefect/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "cadefect/error.hpp"

namespace cadefect::spectral {

using symbolic::floor_div;
using symbolic::floor_mod;

RootOfUnity::RootOfUnity(std::int64_t q, std::int64_t order) {
  if (order <= 0) throw Error(ErrorKind::invalid_argument, "root of unity order must be positive");
  q = floor_mod(q, order);
  const std::int64_t g = std::gcd(q, order);
  q_ = q / g;
  p_ = order / g;
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
  return RootOfUnity(q_ * o.p_ + o.q_ * p_, p_ * o.p_);
}

RootOfUnity RootOfUnity::inverse() const { return RootOfUnity(-q_, p_); }

RootOfUnity RootOfUnity::pow(std::int64_t e) const { return RootOfUnity(floor_mod(e, p_) * q_, p_); }

std::string RootOfUnity::str() const {
  if (p_ == 1) return "1";
  if (p_ == 2) return "-1";
  return "e(" + std::to_string(q_) + "/" + std::to_string(p_) + ")";
}

RootOfUnity PhaseStructure::tau(const RootOfUnity& mu) const {
  if (!rotation) throw Error(ErrorKind::unsupported, "no phase rotation available");
  return mu.pow(*rotation);
}

std::string PhaseStructure::tau_str() const {
  if (!rotation) return "";
  return "lambda^q -> lambda^(" + std::to_string(*rotation) + "q)";
}

bool phases_locally_determined(const subshift::Subshift1D& x, int component) {
  const auto& comp = x.components().at(component);
  const int n = static_cast<int>(comp.states.size());
  std::vector<int> local(x.num_vertices(), -1);
  for (int i = 0; i < n; ++i) local[comp.states[i]] = i;
  subshift::Digraph pairs(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int u = comp.states[i];
      const int v = comp.states[j];
      if (x.vertex_label(u) != x.vertex_label(v)) continue;
      for (int u2 : x.graph().succ[u]) {
        if (local[u2] < 0) continue;
        for (int v2 : x.graph().succ[v]) {
          if (local[v2] < 0 || x.vertex_label(u2) != x.vertex_label(v2)) continue;
          pairs.add_edge(i * n + j, local[u2] * n + local[v2]);
        }
      }
    }
  }
  // phase differences are constant along paths, so checking recurrent pairs suffices
  for (const auto& scc : subshift::transitive_decomposition(pairs).components) {
    for (int p : scc) {
      if (x.phase_of(comp.states[p / n]) != x.phase_of(comp.states[p % n])) return false;
    }
  }
  return true;
}

PhaseStructure rational_spectrum(const subshift::Subshift1D& x, int component, const ca::RestrictionAction* action) {
  const auto& comp = x.components().at(component);
  PhaseStructure ps;
  ps.component = component;
  ps.graph_period = comp.period;
  ps.locally_determined = phases_locally_determined(x, component);
  ps.phase.assign(x.num_vertices(), -1);
  if (ps.locally_determined) {
    ps.period = comp.period;
    for (int v : comp.states) ps.phase[v] = x.phase_of(v);
  } else {
    ps.period = 1;
  }
  if (action && ps.locally_determined && action->image.at(component) == component && action->step[component] >= 0) {
    ps.rotation = static_cast<int>(floor_mod(action->step[component], ps.period));
  }
  return ps;
}

DisplacementGroup DisplacementGroup::cyclic(std::int64_t p) {
  return from_generators(Kind::spacetime, {{1, 0}, {0, p}});
}

DisplacementGroup DisplacementGroup::from_generators(Kind kind, const std::vector<Vec>& gens) {
  std::vector<Vec> rows = gens;
  // Euclid on the first column
  while (true) {
    int pivot = -1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].first != 0 && (pivot < 0 || std::abs(rows[i].first) < std::abs(rows[pivot].first))) {
        pivot = static_cast<int>(i);
      }
    }
    if (pivot < 0) throw Error(ErrorKind::unsupported, "lattice has rank below 2");
    bool done = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == pivot || rows[i].first == 0) continue;
      const std::int64_t q = rows[i].first / rows[pivot].first;
      rows[i].first -= q * rows[pivot].first;
      rows[i].second -= q * rows[pivot].second;
      done = done && rows[i].first == 0;
    }
    if (!done) continue;
    std::swap(rows[0], rows[pivot]);
    break;
  }
  if (rows[0].first < 0) rows[0] = {-rows[0].first, -rows[0].second};
  std::int64_t d = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) d = std::gcd(d, std::abs(rows[i].second));
  if (d == 0) throw Error(ErrorKind::unsupported, "lattice has rank below 2");
  DisplacementGroup g;
  g.kind_ = kind;
  g.a_ = rows[0].first;
  g.b_ = floor_mod(rows[0].second, d);
  g.d_ = d;
  g.gens_ = gens;
  return g;
}

DisplacementGroup::Vec DisplacementGroup::reduce(Vec v) const {
  const std::int64_t q = floor_div(v.first, a_);
  v.first -= q * a_;
  v.second = floor_mod(v.second - q * b_, d_);
  return v;
}

std::int64_t DisplacementGroup::cyclic_value(Vec v) const {
  if (!is_cyclic()) throw Error(ErrorKind::invalid_argument, "group is not cyclic");
  return reduce(v).second;
}

std::string DisplacementGroup::format(Vec v) const {
  if (kind_ == Kind::spacetime && is_cyclic()) return std::to_string(cyclic_value(v));
  v = reduce(v);
  if (kind_ == Kind::planar) {
    // shortest representative, preferring positive x then positive y
    const Vec r = v;
    auto key = [](Vec u) { return std::make_tuple(std::abs(u.first) + std::abs(u.second), -u.first, -u.second); };
    for (std::int64_t i = -2; i <= 2; ++i) {
      for (std::int64_t j = -2; j <= 2; ++j) {
        const Vec u{r.first + i * a_, r.second + i * b_ + j * d_};
        if (key(u) < key(v)) v = u;
      }
    }
  }
  return "(" + std::to_string(v.first) + "," + std::to_string(v.second) + ")";
}

std::string DisplacementGroup::name() const {
  if (kind_ == Kind::spacetime && is_cyclic()) return "Z/" + std::to_string(d_);
  return kind_ == Kind::spacetime ? "Z^2/K" : "Z^2/P";
}

std::optional<int> phase_at(const subshift::Subshift1D& x, int component, const Word& w, std::size_t i) {
  auto states = x.possible_states(w);
  int phase = -1;
  for (int v : states.at(i).members()) {
    if (x.component_of(v) != component) continue;
    if (phase >= 0 && phase != x.phase_of(v)) return std::nullopt;
    phase = x.phase_of(v);
  }
  if (phase < 0) return std::nullopt;
  return phase;
}

RootOfUnity eval_eigenfunction(const subshift::Subshift1D& x, const PhaseStructure& ps, const Word& w, std::int64_t lo) {
  if (w.empty()) throw Error(ErrorKind::invalid_argument, "empty window");
  if (!ps.locally_determined) throw Error(ErrorKind::unsupported, "phases of this component are not locally determined");
  if (!x.admissible(w)) throw Error(ErrorKind::inadmissible, "window is not admissible");
  const std::size_t i = w.size() / 2;
  auto ph = phase_at(x, ps.component, w, i);
  if (!ph) throw Error(ErrorKind::inadmissible, "window does not determine a phase in this component");
  return RootOfUnity(*ph - (lo + static_cast<std::int64_t>(i)), ps.period);
}

namespace {

// Absolute coordinate and phase of the first marker occurrence.
std::optional<std::pair<std::int64_t, int>> find_marker(const subshift::MarkerTable& m, const Word& w, std::int64_t lo) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (const auto& e : m.entries) {
      if (i + e.pattern.size() > w.size()) continue;
      if (std::equal(e.pattern.begin(), e.pattern.end(), w.begin() + i)) {
        return std::make_pair(lo + static_cast<std::int64_t>(i), e.phase);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<RootOfUnity> eval_marker_eigenfunction(const subshift::Subshift1D& x, const Word& w, std::int64_t lo) {
  const auto& m = x.marker();
  if (m.empty()) throw Error(ErrorKind::unsupported, "subshift has no marker table");
  if (!x.admissible(w)) throw Error(ErrorKind::inadmissible, "window is not admissible");
  auto hit = find_marker(m, w, lo);
  if (!hit) return std::nullopt;
  return RootOfUnity(hit->second - hit->first, m.period);
}

DomainLabeller::DomainLabeller(const subshift::Subshift1D& x, const ca::Ca1D* ca) : x_(&x) {
  const int n = static_cast<int>(x.components().size());
  if (ca) action_ = ca::restriction_action(*ca, x);
  for (int c = 0; c < n; ++c) ps_.push_back(rational_spectrum(x, c, action_ ? &*action_ : nullptr));
  comp_class_.assign(n, -1);
  comp_pos_.assign(n, -1);
  for (int c = 0; c < n; ++c) {
    if (comp_class_[c] >= 0) continue;
    DomainClass cls;
    const bool marker = !ps_[c].locally_determined;
    if (marker || !action_ || action_->orbit_shift[c] < 0) {
      cls.components = {c};
      cls.offset = {{0, 0}};
      cls.marker = marker && !x.marker().empty();
      std::int64_t p = marker ? (cls.marker ? x.marker().period : 1) : ps_[c].period;
      cls.group = DisplacementGroup::cyclic(p);
    } else {
      const int p = ps_[c].period;
      Displacement off{0, 0};
      int d = c;
      do {
        if (ps_[d].period != p || !ps_[d].locally_determined) {
          throw Error(ErrorKind::unsupported, "components in one orbit have different periods");
        }
        cls.components.push_back(d);
        cls.offset.push_back(off);
        off = {off.first + 1, off.second - action_->step[d]};
        d = action_->image[d];
      } while (d != c);
      const auto m = static_cast<std::int64_t>(action_->orbit_length[c]);
      const auto s = static_cast<std::int64_t>(action_->orbit_shift[c]);
      cls.group = DisplacementGroup::from_generators(DisplacementGroup::Kind::spacetime, {{m, -s}, {0, p}});
    }
    const int id = static_cast<int>(classes_.size());
    for (std::size_t i = 0; i < cls.components.size(); ++i) {
      comp_class_[cls.components[i]] = id;
      comp_pos_[cls.components[i]] = static_cast<int>(i);
    }
    classes_.push_back(std::move(cls));
  }
}

std::optional<Displacement> DomainLabeller::label(int component, const Word& w, std::int64_t lo, std::size_t base) const {
  const DomainClass& cls = classes_.at(comp_class_.at(component));
  const Displacement off = cls.offset[comp_pos_[component]];
  std::int64_t z;
  if (cls.marker) {
    auto hit = find_marker(x_->marker(), w, lo);
    if (!hit) return std::nullopt;
    z = hit->second - hit->first;
  } else if (cls.group.order() == 1) {
    z = 0;
  } else {
    auto ph = phase_at(*x_, component, w, base);
    if (!ph) return std::nullopt;
    z = *ph - (lo + static_cast<std::int64_t>(base));
  }
  return cls.group.reduce({off.first, off.second + z});
}

}  // namespace cadefect::spectral
