#include "cadefect/tracker.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cadefect/error.hpp"

namespace cadefect::tracker {

using symbolic::floor_mod;
using symbolic::Word;

XorShift64Star::XorShift64Star(std::uint64_t seed) : s_(seed ? seed : 0x9E3779B97F4A7C15ULL) {}

std::uint64_t XorShift64Star::next() {
  s_ ^= s_ >> 12;
  s_ ^= s_ << 25;
  s_ ^= s_ >> 27;
  return s_ * 0x2545F4914F6CDD1DULL;
}

std::uint64_t XorShift64Star::below(std::uint64_t n) {
  // rejection keeps the draw unbiased
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

CyclicConfig random_config(std::size_t n, int k, std::uint64_t seed) {
  if (n == 0 || k <= 0) throw Error(ErrorKind::invalid_argument, "empty random configuration");
  XorShift64Star rng(seed);
  CyclicConfig c;
  c.word.resize(n);
  for (auto& s : c.word) s = static_cast<symbolic::Symbol>(rng.below(static_cast<std::uint64_t>(k)));
  return c;
}

Spacetime simulate(const ca::Ca1D& ca, const CyclicConfig& init, int steps) {
  if (steps < 1) throw Error(ErrorKind::invalid_argument, "need at least one row");
  Spacetime st;
  st.rows.reserve(steps);
  st.rows.push_back(init);
  for (int t = 1; t < steps; ++t) st.rows.push_back(ca.apply(st.rows.back()));
  return st;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::skip: return "SKIP";
  }
  return "SKIP";
}

namespace {

struct Run {
  std::int64_t start;  // unwrapped
  std::int64_t length;
  int component = -1;
  std::optional<Displacement> label;
};

int unique_component(const subshift::Subshift1D& x, const subshift::StateSet& s) {
  int comp = -1;
  for (int v : s.members()) {
    const int cv = x.component_of(v);
    if (cv < 0 || (comp >= 0 && cv != comp)) return -1;
    comp = cv;
  }
  return comp;
}

bool touches(const Interval& a, const Interval& b, std::int64_t n) {
  if (a.length >= n || b.length >= n) return true;
  return floor_mod(b.start - a.start, n) < a.length || floor_mod(a.start - b.start, n) < b.length;
}

Interval widen(const Interval& a, std::int64_t by, std::int64_t n) {
  if (a.length + 2 * by >= n) return Interval{0, n};
  return Interval{floor_mod(a.start - by, n), a.length + 2 * by};
}

template <class T>
std::optional<T> mode(const std::vector<std::optional<T>>& xs) {
  std::map<T, int> count;
  for (const auto& v : xs) {
    if (v) ++count[*v];
  }
  std::optional<T> best;
  int best_n = 0;
  for (const auto& [v, c] : count) {
    if (c > best_n) {
      best = v;
      best_n = c;
    }
  }
  return best;
}

struct Uf {
  std::vector<int> p;
  explicit Uf(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int a) { return p[a] == a ? a : p[a] = find(p[a]); }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

// Locally admissible runs of a sofic background can still be globally inadmissible
// (an even zero gap wider than the window). Cut each run at its minimal
// inadmissible windows, leaving the cells strictly inside them defective.
std::vector<Run> split_inadmissible(const std::vector<Run>& runs, const CyclicConfig& row, const subshift::Subshift1D& x) {
  std::vector<Run> out;
  for (const Run& d : runs) {
    const Word w = symbolic::window(row, d.start, d.start + d.length - 1);
    const auto len = static_cast<std::int64_t>(w.size());
    std::int64_t piece = 0;
    subshift::StateSet cur = x.all_with_label(w[0]);
    for (std::int64_t j = 1; j < len; ++j) {
      cur = x.step_forward(cur, w[j]);
      if (cur.any()) continue;
      std::int64_t i = j - 1;
      subshift::StateSet back = x.all_with_label(w[j]);
      for (; i >= piece; --i) {
        back = x.step_backward(back, w[i]);
        if (!back.any()) break;
      }
      out.push_back(Run{d.start + piece, i - piece + 1, -1, std::nullopt});
      cur = x.all_with_label(w[j]);
      piece = j;
    }
    out.push_back(Run{d.start + piece, len - piece, -1, std::nullopt});
  }
  return out;
}

}  // namespace

std::vector<Blob> row_blobs(const CyclicConfig& row, const subshift::Subshift1D& x, const spectral::DomainLabeller& labeller,
                            int r, int min_domain) {
  const auto n = static_cast<std::int64_t>(row.size());
  std::vector<char> mask = defect::unflawed_mask(row, x, r);
  std::int64_t p = -1;
  for (std::int64_t z = 0; z < n && p < 0; ++z) {
    if (!mask[z]) p = z;
  }
  std::vector<Blob> blobs;
  if (p < 0) {
    // locally clean everywhere; look for a conflict once around the torus
    const auto pieces = split_inadmissible({Run{0, 2 * n, -1, std::nullopt}}, row, x);
    if (pieces.size() < 2) return blobs;
    const std::int64_t lo = pieces[0].start + pieces[0].length;
    const std::int64_t hi = std::max(pieces[1].start, lo + 1);
    for (std::int64_t z = lo; z < hi; ++z) mask[floor_mod(z, n)] = 0;
    p = floor_mod(lo, n);
  }
  std::vector<Run> runs;
  for (std::int64_t z = p + 1; z < p + n; ++z) {
    if (!mask[floor_mod(z, n)]) continue;
    if (!runs.empty() && runs.back().start + runs.back().length == z) ++runs.back().length;
    else runs.push_back(Run{z, 1, -1, std::nullopt});
  }
  runs = split_inadmissible(runs, row, x);
  std::erase_if(runs, [&](const Run& d) { return d.length < min_domain; });
  if (runs.empty()) {
    blobs.push_back(Blob{Interval{0, n}, -1, -1, std::nullopt});
    return blobs;
  }
  for (Run& d : runs) {
    const Word w = symbolic::window(row, d.start, d.start + d.length - 1);
    const std::size_t base = static_cast<std::size_t>(d.length / 2);
    d.component = unique_component(x, x.possible_states(w)[base]);
    if (d.component >= 0) d.label = labeller.label(d.component, w, d.start, base);
  }
  const std::size_t m = runs.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Run& left = runs[i];
    const Run& right = runs[(i + 1) % m];
    const std::int64_t lo = left.start + left.length;
    const std::int64_t hi = i + 1 < m ? right.start : right.start + n;
    Blob b;
    b.cells = Interval{floor_mod(lo, n), hi - lo};
    b.left_component = left.component;
    b.right_component = right.component;
    if (left.label && right.label && labeller.class_of(left.component) == labeller.class_of(right.component)) {
      const auto& g = labeller.classes()[labeller.class_of(left.component)].group;
      Displacement rl = *right.label;
      if (i + 1 == m) rl.second -= n;  // right flank continues one turn later
      b.label = g.sub(*left.label, rl);
    }
    blobs.push_back(b);
  }
  return blobs;
}

std::vector<ParticleTrack> extract_particles(const Spacetime& st, const subshift::Subshift1D& x,
                                             const spectral::DomainLabeller& labeller, int ca_radius,
                                             const TrackerOptions& opt, std::vector<StepTotal>* totals) {
  const int r = opt.r > 0 ? opt.r : x.radius() + 1;
  const int min_domain = opt.min_domain > 0 ? opt.min_domain : 2 * r + 1;
  const int first = opt.burn_in;
  const std::int64_t vanish_gap = opt.vanish_gap > 0 ? opt.vanish_gap : 2 * min_domain + 2 * ca_radius;
  const int last = static_cast<int>(st.rows.size()) - 1;
  if (first > last) throw Error(ErrorKind::invalid_argument, "burn-in leaves no rows to track");
  const auto n = static_cast<std::int64_t>(st.rows.front().size());

  std::vector<ParticleTrack> tracks;
  std::vector<int> prev_ids;
  std::vector<Blob> prev;
  auto open_track = [&](int t, std::vector<int> parents) {
    ParticleTrack tr;
    tr.id = static_cast<int>(tracks.size());
    tr.torus = n;
    tr.birth = t;
    tr.death = t;
    tr.death_group = tr.id;
    tr.parents = std::move(parents);
    for (int pid : tr.parents) tracks[pid].children.push_back(tr.id);
    tracks.push_back(tr);
    return tr.id;
  };
  std::vector<std::vector<std::pair<int, int>>> flanks;  // per track, per row
  auto record = [&](int id, int t, const Blob& b) {
    auto& tr = tracks[id];
    tr.death = t;
    tr.intervals.push_back(b.cells);
    tr.row_labels.push_back(b.label);
    if (flanks.size() <= static_cast<std::size_t>(id)) flanks.resize(id + 1);
    flanks[id].push_back({b.left_component, b.right_component});
  };

  for (int t = first; t <= last; ++t) {
    std::vector<Blob> cur = row_blobs(st.rows[t], x, labeller, r, min_domain);
    std::int64_t bad = 0;
    for (const Blob& b : cur) bad += b.cells.length;
    if (static_cast<double>(bad) > opt.max_defective * static_cast<double>(n)) {
      throw Error(ErrorKind::no_condensation, "row " + std::to_string(t) + " is " + std::to_string(bad) + "/" +
                                                  std::to_string(n) + " defective; background did not condense");
    }
    if (totals) {
      StepTotal tot;
      tot.time = t;
      tot.particles = static_cast<int>(cur.size());
      bool ok = true;
      int cls = -1;
      Displacement sum{0, 0};
      for (const Blob& b : cur) {
        if (!b.label) {
          ok = false;
          break;
        }
        const int c = labeller.class_of(b.left_component);
        if (cls >= 0 && c != cls) ok = false;
        cls = c;
        sum = {sum.first + b.label->first, sum.second + b.label->second};
      }
      if (ok && cls >= 0) {
        tot.label_class = cls;
        tot.total = labeller.classes()[cls].group.reduce(sum);
      }
      totals->push_back(tot);
    }
    std::vector<int> ids(cur.size(), -1);
    if (t == first) {
      for (std::size_t i = 0; i < cur.size(); ++i) {
        ids[i] = open_track(t, {});
        record(ids[i], t, cur[i]);
      }
    } else {
      // clusters of the bipartite contact graph between consecutive rows
      const int a = static_cast<int>(prev.size());
      const int b = static_cast<int>(cur.size());
      Uf uf(a + b);
      for (int i = 0; i < a; ++i) {
        const Interval wide = widen(prev[i].cells, ca_radius, n);
        for (int j = 0; j < b; ++j) {
          if (touches(wide, cur[j].cells, n)) uf.join(i, a + j);
        }
      }
      // neighbours that vanish together annihilated together
      std::vector<char> contact(a, 0);
      for (int i = 0; i < a; ++i) {
        for (int j = 0; j < b; ++j) contact[i] = contact[i] || uf.find(i) == uf.find(a + j);
      }
      for (int i = 0; a > 1 && i < a; ++i) {
        const int k = (i + 1) % a;
        if (contact[i] || contact[k] || (a == 2 && i == 1)) continue;
        const Interval& l = prev[i].cells;
        if (floor_mod(prev[k].cells.start - (l.start + l.length), n) <= vanish_gap) uf.join(i, k);
      }
      std::map<int, std::pair<std::vector<int>, std::vector<int>>> clusters;
      for (int i = 0; i < a; ++i) clusters[uf.find(i)].first.push_back(i);
      for (int j = 0; j < b; ++j) clusters[uf.find(a + j)].second.push_back(j);
      for (auto& [root, members] : clusters) {
        auto& [in, out] = members;
        auto by_start = [&](const std::vector<Blob>& row) {
          return [&row](int u, int v) { return row[u].cells.start < row[v].cells.start; };
        };
        std::sort(in.begin(), in.end(), by_start(prev));
        std::sort(out.begin(), out.end(), by_start(cur));
        if (!in.empty() && in.size() == out.size()) {
          for (std::size_t k = 0; k < in.size(); ++k) {
            ids[out[k]] = prev_ids[in[k]];
            record(ids[out[k]], t, cur[out[k]]);
          }
          continue;
        }
        std::vector<int> parents;
        for (int i : in) parents.push_back(prev_ids[i]);
        if (out.empty() && !parents.empty()) {
          const int rep = *std::min_element(parents.begin(), parents.end());
          for (int id : parents) tracks[id].death_group = rep;
        }
        for (int j : out) {
          ids[j] = open_track(t, parents);
          record(ids[j], t, cur[j]);
        }
      }
    }
    prev = std::move(cur);
    prev_ids = std::move(ids);
  }

  for (auto& tr : tracks) {
    tr.label = mode(tr.row_labels);
    std::vector<std::optional<std::pair<int, int>>> fl;
    for (const auto& f : flanks[tr.id]) fl.push_back(f);
    auto best = mode(fl);
    if (best) {
      tr.left_component = best->first;
      tr.right_component = best->second;
    }
    if (tr.left_component >= 0 && tr.right_component >= 0 &&
        labeller.class_of(tr.left_component) == labeller.class_of(tr.right_component)) {
      tr.label_class = labeller.class_of(tr.left_component);
    }
  }
  return tracks;
}

std::vector<CollisionEvent> detect_collisions(const std::vector<ParticleTrack>& tracks, int settle, int first_row,
                                              int last_row) {
  auto short_lived = [&](const ParticleTrack& tr) {
    return tr.death - tr.birth + 1 < settle && tr.birth > first_row && tr.death < last_row;
  };
  // junctions keyed by (time, representative); a track's birth and death junctions
  std::map<std::pair<int, int>, int> junction_id;
  std::vector<std::pair<int, int>> junction_key;
  auto junction = [&](int time, int rep) {
    auto [it, fresh] = junction_id.emplace(std::make_pair(time, rep), static_cast<int>(junction_key.size()));
    if (fresh) junction_key.push_back({time, rep});
    return it->second;
  };
  const int nt = static_cast<int>(tracks.size());
  std::vector<int> born_at(nt, -1), died_at(nt, -1);
  for (const auto& tr : tracks) {
    if (!tr.parents.empty()) {
      born_at[tr.id] = junction(tr.birth, *std::min_element(tr.parents.begin(), tr.parents.end()));
    } else if (tr.birth > first_row) {
      born_at[tr.id] = junction(tr.birth, -1 - tr.id);
    }
  }
  for (const auto& tr : tracks) {
    if (!tr.children.empty()) died_at[tr.id] = born_at[tr.children.front()];
    else if (tr.death < last_row) died_at[tr.id] = junction(tr.death + 1, tr.death_group);
  }
  const int nj = static_cast<int>(junction_key.size());
  Uf uf(std::max(nj, 1));
  for (const auto& tr : tracks) {
    if (short_lived(tr) && born_at[tr.id] >= 0 && died_at[tr.id] >= 0) uf.join(born_at[tr.id], died_at[tr.id]);
  }
  std::map<int, CollisionEvent> events;
  for (int j = 0; j < nj; ++j) {
    auto& ev = events[uf.find(j)];
    if (ev.incoming.empty() && ev.outgoing.empty()) ev.time = junction_key[j].first;
    ev.time = std::min(ev.time, junction_key[j].first);
  }
  for (const auto& tr : tracks) {
    if (short_lived(tr)) continue;
    if (died_at[tr.id] >= 0) events[uf.find(died_at[tr.id])].incoming.push_back(tr.id);
    if (born_at[tr.id] >= 0) events[uf.find(born_at[tr.id])].outgoing.push_back(tr.id);
  }
  std::vector<CollisionEvent> out;
  for (auto& [root, ev] : events) {
    if (ev.incoming.size() == 1 && ev.outgoing.size() == 1) continue;
    if (ev.incoming.empty() && ev.outgoing.empty()) continue;
    out.push_back(ev);
  }
  std::stable_sort(out.begin(), out.end(), [](const CollisionEvent& a, const CollisionEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.incoming < b.incoming;
  });
  return out;
}

namespace {

// Tracks ordered left to right around the torus, cut at the widest gap.
std::vector<int> spatial_order(const std::vector<int>& ids, const std::vector<ParticleTrack>& tracks, bool at_end) {
  if (ids.size() < 2) return ids;
  const std::int64_t n = tracks[ids.front()].torus;
  std::vector<std::pair<std::int64_t, int>> pos;
  for (int id : ids) {
    const auto& tr = tracks[id];
    const Interval& iv = at_end ? tr.intervals.back() : tr.intervals.front();
    pos.push_back({iv.start, id});
  }
  std::sort(pos.begin(), pos.end());
  std::size_t cut = 0;
  std::int64_t widest = -1;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const std::int64_t prev_start = pos[(i + pos.size() - 1) % pos.size()].first;
    const std::int64_t gap = floor_mod(pos[i].first - prev_start, n);
    if (gap > widest) {
      widest = gap;
      cut = i;
    }
  }
  std::vector<int> out;
  for (std::size_t k = 0; k < pos.size(); ++k) out.push_back(pos[(cut + k) % pos.size()].second);
  return out;
}

}  // namespace

ConservationReport verify_conservation(std::vector<CollisionEvent>& events, const std::vector<ParticleTrack>& tracks,
                                       const spectral::DomainLabeller& labeller) {
  ConservationReport rep;
  for (auto& ev : events) {
    int cls = -2;
    bool labelled = true;
    auto visit = [&](int id) {
      const auto& tr = tracks[id];
      if (tr.label_class < 0 || !tr.label) {
        labelled = false;
        return;
      }
      if (cls == -2) cls = tr.label_class;
      else if (cls != tr.label_class) labelled = false;
    };
    for (int id : ev.incoming) visit(id);
    for (int id : ev.outgoing) visit(id);
    if (labelled && cls >= 0) {
      const auto& g = labeller.classes()[cls].group;
      Displacement in{0, 0}, out{0, 0};
      for (int id : ev.incoming) in = g.add(in, *tracks[id].label);
      for (int id : ev.outgoing) out = g.add(out, *tracks[id].label);
      ev.label_class = cls;
      ev.incoming_sum = in;
      ev.outgoing_sum = out;
      ev.verdict = g.equal(in, out) ? Verdict::pass : Verdict::fail;
    } else {
      // interfaces compose along the line: compare the outermost flanks
      bool any_interface = false;
      for (int id : ev.incoming) any_interface = any_interface || tracks[id].label_class < 0;
      for (int id : ev.outgoing) any_interface = any_interface || tracks[id].label_class < 0;
      ev.interface_event = any_interface;
      ev.verdict = Verdict::skip;
      if (any_interface && !ev.incoming.empty()) {
        auto in = spatial_order(ev.incoming, tracks, true);
        const int lo_in = tracks[in.front()].left_component;
        const int hi_in = tracks[in.back()].right_component;
        if (lo_in >= 0 && hi_in >= 0) {
          if (ev.outgoing.empty()) {
            ev.verdict = lo_in == hi_in ? Verdict::pass : Verdict::fail;
          } else {
            auto out = spatial_order(ev.outgoing, tracks, false);
            const int lo_out = tracks[out.front()].left_component;
            const int hi_out = tracks[out.back()].right_component;
            if (lo_out >= 0 && hi_out >= 0) ev.verdict = lo_in == lo_out && hi_in == hi_out ? Verdict::pass : Verdict::fail;
          }
        }
      }
    }
    if (ev.verdict == Verdict::pass) ++rep.pass;
    else if (ev.verdict == Verdict::fail) ++rep.fail;
    else ++rep.skip;
  }
  return rep;
}

TrackResult track(const ca::Ca1D& ca, const CyclicConfig& init, int steps, const subshift::Subshift1D& x,
                  const spectral::DomainLabeller& labeller, const TrackerOptions& opt) {
  if (!(ca.alphabet() == x.alphabet())) throw Error(ErrorKind::invalid_argument, "CA and subshift alphabets differ");
  Spacetime st = simulate(ca, init, steps);
  TrackResult res;
  res.r = opt.r > 0 ? opt.r : x.radius() + 1;
  res.min_domain = opt.min_domain > 0 ? opt.min_domain : 2 * res.r + 1;
  res.tracks = extract_particles(st, x, labeller, ca.radius(), opt, &res.totals);
  res.events = detect_collisions(res.tracks, opt.settle, opt.burn_in, steps - 1);
  verify_conservation(res.events, res.tracks, labeller);
  return res;
}

}  // namespace cadefect::tracker
