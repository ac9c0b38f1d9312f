#include "cadefect/defect.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "cadefect/error.hpp"

namespace cadefect::defect {

using symbolic::floor_mod;

namespace {

// Largest r in [0, cap] with ok(r), given ok is monotone decreasing and ok(0).
template <class Ok>
int largest_ok(Ok ok, int cap) {
  int good = 0;
  int bad = -1;
  for (int r = 1; r <= cap; r = r < cap / 2 ? r * 2 : cap) {
    if (!ok(r)) {
      bad = r;
      break;
    }
    good = r;
    if (r == cap) break;
  }
  if (bad < 0) return good;
  while (bad - good > 1) {
    int mid = good + (bad - good) / 2;
    if (ok(mid)) good = mid;
    else bad = mid;
  }
  return good;
}

void require_tails(const EpConfig& c, const subshift::Subshift1D& x) {
  if (!x.contains_periodic(c.left)) throw Error(ErrorKind::inadmissible, "left tail is not admissible");
  if (!x.contains_periodic(c.right)) throw Error(ErrorKind::inadmissible, "right tail is not admissible");
}

int field_value_known(const EpConfig& c, const subshift::Subshift1D& x, std::int64_t z) {
  if (!x.admissible(symbolic::window(c, z, z))) return -1;
  auto ok = [&](int r) { return x.admissible(symbolic::window(c, z - r, z + r)); };
  return largest_ok(ok, INT_MAX / 4);
}

}  // namespace

int field_value(const EpConfig& c, const subshift::Subshift1D& x, std::int64_t z) {
  if (x.contains(c)) return kInfinite;
  return field_value_known(c, x, z);
}

DefectField1D defect_field(const EpConfig& c, const subshift::Subshift1D& x, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorKind::invalid_argument, "empty field window");
  DefectField1D f;
  f.lo = lo;
  const bool inside = x.contains(c);
  for (std::int64_t z = lo; z <= hi; ++z) f.values.push_back(inside ? kInfinite : field_value_known(c, x, z));
  return f;
}

DefectField1D defect_field(const CyclicConfig& c, const subshift::Subshift1D& x) {
  const auto n = static_cast<std::int64_t>(c.size());
  if (n == 0) throw Error(ErrorKind::invalid_argument, "empty cyclic configuration");
  DefectField1D f;
  f.lo = 0;
  f.capped = true;
  f.cap = static_cast<int>((n - 1) / 2);
  for (std::int64_t z = 0; z < n; ++z) {
    if (!x.admissible(symbolic::window(c, z, z))) {
      f.values.push_back(-1);
      continue;
    }
    auto ok = [&](int r) { return x.admissible(symbolic::window(c, z - r, z + r)); };
    f.values.push_back(largest_ok(ok, f.cap));
  }
  return f;
}

DefectField2D defect_field(const Grid2D& g, const subshift::Shift2D& x) {
  DefectField2D f;
  f.width = g.width;
  f.height = g.height;
  f.cap = std::max(g.width, g.height);
  f.values.assign(static_cast<std::size_t>(g.width) * g.height, 0);
  for (int y = 0; y < g.height; ++y) {
    for (int cx = 0; cx < g.width; ++cx) {
      auto ok = [&](int r) {
        return x.patch_admissible(g, std::max(0, cx - r), std::max(0, y - r), std::min(g.width - 1, cx + r),
                                  std::min(g.height - 1, y + r));
      };
      int v = ok(0) ? largest_ok(ok, f.cap) : -1;
      f.values[static_cast<std::size_t>(y) * g.width + cx] = v;
    }
  }
  return f;
}

std::vector<std::int64_t> defect_set(const DefectField1D& f) {
  std::vector<std::int64_t> out;
  const std::size_t n = f.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int v = f.values[i];
    if (!f.bounded(v)) continue;
    bool min = (i == 0 || f.values[i - 1] >= v) && (i + 1 == n || f.values[i + 1] >= v);
    if (min) out.push_back(f.lo + static_cast<std::int64_t>(i));
  }
  return out;
}

std::vector<std::pair<int, int>> defect_set(const DefectField2D& f) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const int v = f.at(x, y);
      if (!f.bounded(v)) continue;
      bool min = (x == 0 || f.at(x - 1, y) >= v) && (x + 1 == f.width || f.at(x + 1, y) >= v) &&
                 (y == 0 || f.at(x, y - 1) >= v) && (y + 1 == f.height || f.at(x, y + 1) >= v);
      if (min) out.push_back({x, y});
    }
  }
  return out;
}

std::vector<char> unflawed_mask(const CyclicConfig& c, const subshift::Subshift1D& x, int r) {
  const auto n = static_cast<std::int64_t>(c.size());
  const std::int64_t span = 2 * static_cast<std::int64_t>(r) + 1;
  Word ext;
  ext.reserve(n + span);
  for (std::int64_t i = -r; i < n + r; ++i) ext.push_back(c.at(i));
  std::vector<char> mask(n, 0);
  for (std::int64_t z = 0; z < n; ++z) mask[z] = x.admissible(ext.data() + z, static_cast<std::size_t>(span));
  return mask;
}

namespace {

std::int64_t margin_for(const EpConfig& c, const subshift::Subshift1D& x) {
  std::int64_t m = static_cast<std::int64_t>(std::max(c.left.size(), c.right.size()));
  for (const auto& comp : x.components()) m = std::max<std::int64_t>(m, comp.period);
  return 2 * x.radius() + 4 * m + 8;
}

int unique_component(const subshift::Subshift1D& x, const subshift::StateSet& s) {
  int comp = -1;
  for (int v : s.members()) {
    const int cv = x.component_of(v);
    if (cv < 0 || (comp >= 0 && cv != comp)) return -1;
    comp = cv;
  }
  return comp;
}

}  // namespace

int default_range(const EpConfig& c, const subshift::Subshift1D& x) {
  const int floor_r = x.radius() + 1;
  if (x.contains(c)) return floor_r;
  const std::int64_t m = static_cast<std::int64_t>(c.center.size()) + margin_for(c, x);
  DefectField1D f = defect_field(c, x, c.anchor - m, c.end() + m);
  int best = floor_r;
  for (std::int64_t z : defect_set(f)) {
    if (z == f.lo || z == f.hi()) continue;
    best = std::max(best, f.at(z) + 1);
  }
  return best;
}

DomainDecomposition domain_components(const EpConfig& c, const subshift::Subshift1D& x, int r,
                                      const spectral::DomainLabeller* labeller) {
  if (r < x.radius() + 1) throw Error(ErrorKind::invalid_argument, "range must exceed the subshift radius");
  require_tails(c, x);
  DomainDecomposition d;
  d.r = r;
  const std::int64_t a = c.anchor - r - 2;
  const std::int64_t b = c.end() + r + 1;
  std::vector<char> mask;
  for (std::int64_t z = a; z <= b; ++z) mask.push_back(x.admissible(symbolic::window(c, z - r, z + r)));
  // runs of unflawed cells; the first and last runs continue into the tails
  std::vector<std::pair<std::int64_t, std::int64_t>> runs;
  for (std::int64_t z = a; z <= b; ++z) {
    if (!mask[z - a]) continue;
    if (!runs.empty() && runs.back().second == z - 1) runs.back().second = z;
    else runs.push_back({z, z});
  }
  const std::int64_t m = margin_for(c, x) + r;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    Domain dom;
    dom.lo = runs[i].first;
    dom.hi = runs[i].second;
    dom.unbounded_left = i == 0;
    dom.unbounded_right = i + 1 == runs.size();
    dom.projective = dom.unbounded_left || dom.unbounded_right;
    std::int64_t lo = dom.lo;
    std::int64_t hi = dom.hi;
    if (dom.unbounded_left && dom.unbounded_right) {
      lo = a - 2 * m;
      hi = b + 2 * m;
      dom.base = c.anchor - m;
    } else if (dom.unbounded_left) {
      lo = dom.hi - 2 * m;
      dom.base = dom.hi - m;
    } else if (dom.unbounded_right) {
      hi = dom.lo + 2 * m;
      dom.base = dom.lo + m;
    } else {
      dom.base = lo + (hi - lo) / 2;
    }
    const Word w = symbolic::window(c, lo, hi);
    auto states = x.possible_states(w);
    const std::size_t bi = static_cast<std::size_t>(dom.base - lo);
    dom.component = unique_component(x, states[bi]);
    if (labeller && dom.component >= 0) dom.label = labeller->label(dom.component, w, lo, bi);
    d.domains.push_back(dom);
  }
  return d;
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::none: return "none";
    case Kind::interface: return "interface";
    case Kind::dislocation: return "dislocation";
    case Kind::marker_dislocation: return "marker_dislocation";
    case Kind::unclassified: return "unclassified";
  }
  return "unclassified";
}

DefectReport classify(const EpConfig& c, const subshift::Subshift1D& x, const spectral::DomainLabeller& labeller, int r) {
  require_tails(c, x);
  DefectReport rep;
  rep.r = r > 0 ? r : default_range(c, x);
  const std::int64_t m = static_cast<std::int64_t>(c.center.size()) + margin_for(c, x);
  if (!x.contains(c)) {
    DefectField1D f = defect_field(c, x, c.anchor - m, c.end() + m);
    for (std::int64_t z : defect_set(f)) {
      if (z != f.lo && z != f.hi()) rep.defect_set.push_back(z);
    }
  }
  rep.decomposition = domain_components(c, x, rep.r, &labeller);
  const auto& doms = rep.decomposition.domains;
  for (const Domain& dom : doms) {
    if (dom.projective) rep.signature.push_back(dom.component >= 0 ? x.components()[dom.component].name : "?");
  }
  rep.removable = is_removable(c, x);
  if (x.contains(c)) {
    rep.kind = Kind::none;
    return rep;
  }
  if (doms.size() < 2) {
    rep.kind = Kind::unclassified;
    return rep;
  }
  const Domain& left = doms.front();
  const Domain& right = doms.back();
  if (left.component < 0 || right.component < 0) {
    rep.kind = Kind::unclassified;
    return rep;
  }
  const int cls = labeller.class_of(left.component);
  if (cls != labeller.class_of(right.component)) {
    rep.kind = Kind::interface;
    rep.essential = true;
    return rep;
  }
  const auto& dc = labeller.classes()[cls];
  rep.group = dc.group;
  if (!left.label || !right.label) {
    rep.kind = Kind::unclassified;
    return rep;
  }
  rep.kind = dc.marker ? Kind::marker_dislocation : Kind::dislocation;
  rep.displacement = dc.group.sub(*left.label, *right.label);
  rep.essential = !dc.group.equal(*rep.displacement, {0, 0});
  bool all = true;
  for (const Domain& dom : doms) {
    all = all && dom.label && dom.component >= 0 && labeller.class_of(dom.component) == cls;
  }
  if (all) {
    for (const Domain& dn : doms) {
      std::vector<Displacement> row;
      for (const Domain& dm : doms) row.push_back(dc.group.sub(*dn.label, *dm.label));
      rep.matrix.push_back(row);
    }
  }
  return rep;
}

std::int64_t phase_gap(const subshift::Subshift1D& x, int left_state, int right_state, std::int64_t gap) {
  const int cl = x.component_of(left_state);
  const int cr = x.component_of(right_state);
  if (cl < 0 || cl != cr) throw Error(ErrorKind::invalid_argument, "junction states lie in different components");
  const int p = x.components()[cl].period;
  return floor_mod(gap + 1 - (x.phase_of(right_state) - x.phase_of(left_state)), p);
}

bool is_removable(const EpConfig& c, const subshift::Subshift1D& x) {
  require_tails(c, x);
  if (x.contains(c)) return true;
  const subshift::StateSet sl = x.left_tail_states(c.left);
  const subshift::StateSet sr = x.right_tail_states(c.right);
  const auto g = static_cast<std::int64_t>(std::gcd(c.left.size(), c.right.size()));
  const std::int64_t need = floor_mod(static_cast<std::int64_t>(c.center.size()) + 1, g);
  // the cut points may move outward by whole tail periods, so only length mod g matters
  const int n = x.num_vertices();
  std::vector<char> seen(static_cast<std::size_t>(n) * g, 0);
  std::queue<std::pair<int, std::int64_t>> q;
  for (int v : sl.members()) {
    seen[static_cast<std::size_t>(v) * g] = 1;
    q.push({v, 0});
  }
  while (!q.empty()) {
    auto [v, k] = q.front();
    q.pop();
    for (int w : x.graph().succ[v]) {
      if (!x.essential(w)) continue;
      const std::int64_t k2 = (k + 1) % g;
      if (k2 == need && sr.test(w)) return true;
      std::size_t id = static_cast<std::size_t>(w) * g + k2;
      if (!seen[id]) {
        seen[id] = 1;
        q.push({w, k2});
      }
    }
  }
  return false;
}

DisplacementGroup periodicity_group(const Grid2D& tile) {
  std::vector<Displacement> gens{{tile.width, 0}, {0, tile.height}};
  for (int vy = 0; vy < tile.height; ++vy) {
    for (int vx = 0; vx < tile.width; ++vx) {
      if (vx == 0 && vy == 0) continue;
      bool same = true;
      for (int y = 0; y < tile.height && same; ++y) {
        for (int x = 0; x < tile.width && same; ++x) same = tile.at_wrapped(x + vx, y + vy) == tile.at(x, y);
      }
      if (same) gens.push_back({vx, vy});
    }
  }
  return DisplacementGroup::from_generators(DisplacementGroup::Kind::planar, gens);
}

std::vector<Displacement> reduced_basis(const DisplacementGroup& g) {
  Displacement u{g.a(), g.b()};
  Displacement v{0, g.d()};
  auto dot = [](Displacement p, Displacement q) { return p.first * q.first + p.second * q.second; };
  while (true) {
    if (dot(u, u) > dot(v, v)) std::swap(u, v);
    const std::int64_t uu = dot(u, u);
    const std::int64_t uv = dot(u, v);
    // nearest integer to uv / uu
    const std::int64_t mu = symbolic::floor_div(2 * uv + uu, 2 * uu);
    if (mu == 0) break;
    v = {v.first - mu * u.first, v.second - mu * u.second};
    if (dot(v, v) >= uu) break;
  }
  auto canon = [](Displacement p) {
    if (p.first < 0 || (p.first == 0 && p.second < 0)) return Displacement{-p.first, -p.second};
    return p;
  };
  return {canon(u), canon(v)};
}

Report2D classify2d(const Grid2D& g, const subshift::Shift2D& x, int r, int box) {
  if (r <= 0) r = 1;  // nearest-neighbour tiling constraints
  Report2D rep;
  rep.r = r;
  const int w = g.width;
  const int h = g.height;
  std::vector<char> mask(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int cx = 0; cx < w; ++cx) {
      mask[static_cast<std::size_t>(y) * w + cx] = x.patch_admissible(
          g, std::max(0, cx - r), std::max(0, y - r), std::min(w - 1, cx + r), std::min(h - 1, y + r));
    }
  }
  std::vector<int> comp(mask.size(), -1);
  std::vector<Domain2D> doms;
  for (int y = 0; y < h; ++y) {
    for (int cx = 0; cx < w; ++cx) {
      const std::size_t id = static_cast<std::size_t>(y) * w + cx;
      if (!mask[id] || comp[id] >= 0) continue;
      Domain2D dom;
      std::queue<std::pair<int, int>> q;
      q.push({cx, y});
      comp[id] = static_cast<int>(doms.size());
      while (!q.empty()) {
        auto [px, py] = q.front();
        q.pop();
        dom.cells.push_back({px, py});
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = px + dx[k];
          const int ny = py + dy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t nid = static_cast<std::size_t>(ny) * w + nx;
          if (mask[nid] && comp[nid] < 0) {
            comp[nid] = comp[id];
            q.push({nx, ny});
          }
        }
      }
      doms.push_back(std::move(dom));
    }
  }
  const auto patterns = x.periodic_patterns(box);
  std::vector<Displacement> raw(doms.size());
  for (std::size_t i = 0; i < doms.size(); ++i) {
    for (const auto& p : patterns) {
      bool found = false;
      for (int vy = 0; vy < box && !found; ++vy) {
        for (int vx = 0; vx < box && !found; ++vx) {
          bool ok = true;
          for (auto [px, py] : doms[i].cells) {
            if (g.at(px, py) != p.tile.at_wrapped(px + vx, py + vy)) {
              ok = false;
              break;
            }
          }
          if (ok) {
            found = true;
            doms[i].component = p.component;
            raw[i] = {vx, vy};
          }
        }
      }
      if (found) break;
    }
  }
  std::vector<std::size_t> order(doms.size());
  std::iota(order.begin(), order.end(), 0);
  auto top = [&](std::size_t i) {
    int best = -1;
    for (auto [px, py] : doms[i].cells) best = std::max(best, py);
    return best;
  };
  auto left = [&](std::size_t i) {
    int best = w;
    for (auto [px, py] : doms[i].cells) best = std::min(best, px);
    return best;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (top(i) != top(j)) return top(i) > top(j);
    return left(i) < left(j);
  });
  for (std::size_t i : order) rep.domains.push_back(doms[i]);
  std::vector<Displacement> labels;
  for (std::size_t i : order) labels.push_back(raw[i]);
  if (rep.domains.size() < 2) {
    rep.kind = Kind::none;
    return rep;
  }
  const int c0 = rep.domains[0].component;
  bool same = c0 >= 0;
  for (const auto& dom : rep.domains) same = same && dom.component == c0;
  if (!same) {
    bool known = true;
    for (const auto& dom : rep.domains) known = known && dom.component >= 0;
    rep.kind = known ? Kind::interface : Kind::unclassified;
    return rep;
  }
  rep.group = periodicity_group(patterns[c0].tile);
  for (std::size_t i = 0; i < rep.domains.size(); ++i) rep.domains[i].label = rep.group->reduce(labels[i]);
  for (std::size_t n = 0; n < rep.domains.size(); ++n) {
    std::vector<Displacement> row;
    for (std::size_t m2 = 0; m2 < rep.domains.size(); ++m2) {
      row.push_back(rep.group->sub(*rep.domains[n].label, *rep.domains[m2].label));
    }
    rep.matrix.push_back(row);
  }
  rep.kind = Kind::dislocation;
  return rep;
}

}  // namespace cadefect::defect
