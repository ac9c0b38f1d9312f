#include "cadefect/ca.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "cadefect/error.hpp"

namespace cadefect::ca {

using symbolic::floor_mod;

Ca1D::Ca1D(Alphabet alphabet, int radius, std::vector<Symbol> table)
    : alphabet_(std::move(alphabet)), radius_(radius), table_(std::move(table)) {
  if (radius_ < 0) throw Error(ErrorKind::parse, "negative CA radius");
  std::size_t expected = 1;
  for (int i = 0; i < 2 * radius_ + 1; ++i) {
    expected *= static_cast<std::size_t>(alphabet_.size());
    if (expected > (std::size_t{1} << 24)) throw Error(ErrorKind::unsupported, "rule table too large");
  }
  if (table_.size() != expected) throw Error(ErrorKind::parse, "rule table must have k^(2R+1) entries");
  for (Symbol s : table_) {
    if (s >= alphabet_.size()) throw Error(ErrorKind::parse, "rule table output outside alphabet");
  }
}

Ca1D Ca1D::from_eca_number(int n) {
  if (n < 0 || n > 255) throw Error(ErrorKind::invalid_argument, "ECA number must lie in 0..255");
  std::vector<Symbol> table(8);
  for (int i = 0; i < 8; ++i) table[i] = static_cast<Symbol>((n >> i) & 1);
  return Ca1D(Alphabet::binary(), 1, table);
}

Ca1D Ca1D::identity(const Alphabet& alphabet) {
  std::vector<Symbol> table(alphabet.size());
  for (int i = 0; i < alphabet.size(); ++i) table[i] = static_cast<Symbol>(i);
  return Ca1D(alphabet, 0, table);
}

Symbol Ca1D::local(const Symbol* nb) const {
  std::size_t idx = 0;
  const std::size_t k = alphabet_.size();
  for (int i = 0; i < 2 * radius_ + 1; ++i) idx = idx * k + nb[i];
  return table_[idx];
}

Word Ca1D::apply_block(const Word& w) const {
  const std::size_t span = 2 * static_cast<std::size_t>(radius_) + 1;
  Word out;
  if (w.size() < span) return out;
  out.reserve(w.size() - span + 1);
  for (std::size_t i = 0; i + span <= w.size(); ++i) out.push_back(local(w.data() + i));
  return out;
}

Word Ca1D::apply_periodic(const Word& w) const {
  const auto p = static_cast<std::int64_t>(w.size());
  Word ext;
  ext.reserve(w.size() + 2 * radius_);
  for (std::int64_t i = -radius_; i < p + radius_; ++i) ext.push_back(w[floor_mod(i, p)]);
  return apply_block(ext);
}

EpConfig Ca1D::apply(const EpConfig& c) const {
  const std::int64_t r = radius_;
  const auto p = static_cast<std::int64_t>(c.left.size());
  const auto q = static_cast<std::int64_t>(c.right.size());
  EpConfig out;
  out.anchor = c.anchor - r;
  // cells below anchor - R only see the left tail, cells from end + R only the right one
  out.left = apply_block(symbolic::window(c, out.anchor - p - r, out.anchor - 1 + r));
  out.center = apply_block(symbolic::window(c, out.anchor - r, c.end() + r - 1 + r));
  out.right = apply_block(symbolic::window(c, c.end() + r - r, c.end() + r + q - 1 + r));
  return symbolic::normalize(out);
}

CyclicConfig Ca1D::apply(const CyclicConfig& c) const {
  if (c.word.empty()) throw Error(ErrorKind::invalid_argument, "empty cyclic configuration");
  return CyclicConfig{apply_periodic(c.word)};
}

std::vector<std::pair<int, int>> Ca2D::moore() {
  std::vector<std::pair<int, int>> h;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) h.push_back({dx, dy});
  }
  return h;
}

Ca2D Ca2D::voter(std::int64_t num, std::int64_t den, std::vector<std::pair<int, int>> h) {
  if (den <= 0 || num < 0 || num > den) throw Error(ErrorKind::parse, "voter threshold must lie in [0,1]");
  if (h.empty()) throw Error(ErrorKind::parse, "empty neighbourhood");
  Ca2D ca;
  ca.kind = Kind::voter;
  ca.alphabet = Alphabet::binary();
  ca.neighbourhood = std::move(h);
  ca.theta_num = num;
  ca.theta_den = den;
  return ca;
}

Ca2D Ca2D::antiferro(std::vector<std::pair<int, int>> h) {
  if (h.empty()) throw Error(ErrorKind::parse, "empty neighbourhood");
  Ca2D ca;
  ca.kind = Kind::antiferro;
  ca.alphabet = Alphabet::binary();
  ca.neighbourhood = std::move(h);
  return ca;
}

int Ca2D::radius() const {
  int r = 0;
  for (auto [dx, dy] : neighbourhood) r = std::max({r, std::abs(dx), std::abs(dy)});
  return r;
}

Symbol Ca2D::local(const Grid2D& g, int x, int y) const {
  switch (kind) {
    case Kind::table: {
      std::size_t idx = 0;
      for (auto [dx, dy] : neighbourhood) idx = idx * alphabet.size() + g.at_wrapped(x + dx, y + dy);
      return table.at(idx);
    }
    case Kind::voter: {
      std::int64_t white = 0;
      for (auto [dx, dy] : neighbourhood) white += g.at_wrapped(x + dx, y + dy) == 1;
      const auto n = static_cast<std::int64_t>(neighbourhood.size());
      return white * theta_den < theta_num * n ? 0 : 1;
    }
    case Kind::antiferro: {
      int balance = 0;
      for (auto [dx, dy] : neighbourhood) {
        if (g.at_wrapped(x + dx, y + dy) != 1) continue;
        balance += floor_mod(dx + dy, 2) == 0 ? 1 : -1;
      }
      return balance < 0 ? 0 : 1;
    }
  }
  return 0;
}

Grid2D apply_grid(const Ca2D& ca, const Grid2D& g) {
  Grid2D out(g.width, g.height);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) out.set(x, y, ca.local(g, x, y));
  }
  return out;
}

namespace {

void check_alphabet(const Ca1D& ca, const subshift::Subshift1D& x) {
  if (!(ca.alphabet() == x.alphabet())) throw Error(ErrorKind::invalid_argument, "CA and subshift alphabets differ");
}

}  // namespace

InvarianceCertificate verify_weak_invariance(const Ca1D& ca, const subshift::Subshift1D& x, int r) {
  check_alphabet(ca, x);
  if (r < 0) throw Error(ErrorKind::invalid_argument, "negative radius");
  InvarianceCertificate cert;
  cert.r = r;
  cert.invariant = true;
  std::map<Word, bool> seen;
  for (const Word& b : x.language(2 * static_cast<std::size_t>(r + ca.radius()) + 1)) {
    ++cert.blocks_checked;
    Word img = ca.apply_block(b);
    auto [it, fresh] = seen.emplace(img, false);
    if (fresh) it->second = x.admissible(img);
    if (!it->second && !cert.witness) {
      cert.invariant = false;
      cert.witness = b;
      cert.witness_image = img;
    }
  }
  cert.distinct_images = seen.size();
  return cert;
}

InjectivityCertificate check_block_injectivity(const Ca1D& ca, const subshift::Subshift1D& x, int r) {
  check_alphabet(ca, x);
  if (r < 0) throw Error(ErrorKind::invalid_argument, "negative radius");
  InjectivityCertificate cert;
  cert.r = r;
  cert.injective = true;
  std::map<Word, Word> preimage;
  for (const Word& b : x.language(2 * static_cast<std::size_t>(r + ca.radius()) + 1)) {
    ++cert.blocks_checked;
    auto [it, fresh] = preimage.emplace(ca.apply_block(b), b);
    if (!fresh && cert.injective) {
      cert.injective = false;
      cert.collision = std::make_pair(it->second, b);
    }
  }
  return cert;
}

Word reference_word(const subshift::Subshift1D& x, int component) {
  const auto& comp = x.components().at(component);
  if (comp.finite_orbit) return comp.orbit_word;
  const int root = comp.states.front();
  std::vector<int> parent(x.num_vertices(), -2);
  std::queue<int> q;
  q.push(root);
  parent[root] = -1;
  int last = -1;
  while (!q.empty() && last < 0) {
    int u = q.front();
    q.pop();
    for (int v : x.graph().succ[u]) {
      if (x.component_of(v) != component) continue;
      if (v == root) {
        last = u;
        break;
      }
      if (parent[v] == -2) {
        parent[v] = u;
        q.push(v);
      }
    }
  }
  std::vector<int> path;
  for (int v = last; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  Word w;
  for (int v : path) w.push_back(x.vertex_label(v));
  return w;
}

RestrictionAction restriction_action(const Ca1D& ca, const subshift::Subshift1D& x) {
  check_alphabet(ca, x);
  const auto& comps = x.components();
  const int n = static_cast<int>(comps.size());
  RestrictionAction act;
  act.image.assign(n, -1);
  act.step.assign(n, -1);
  act.orbit_length.assign(n, 0);
  act.orbit_shift.assign(n, -1);
  for (int c = 0; c < n; ++c) {
    Word w = reference_word(x, c);
    Word img = ca.apply_periodic(w);
    subshift::StateSet s = x.step_forward(x.left_tail_states(img), img[0]);
    if (!s.any()) throw Error(ErrorKind::inadmissible, "image of component " + comps[c].name + " leaves the subshift");
    int target = -1;
    int phase = -1;
    bool phase_known = true;
    for (int v : s.members()) {
      int cv = x.component_of(v);
      if (cv < 0 || (target >= 0 && cv != target)) {
        throw Error(ErrorKind::unsupported, "image of component " + comps[c].name + " is not inside one component");
      }
      target = cv;
      if (phase < 0) phase = x.phase_of(v);
      else if (phase != x.phase_of(v)) phase_known = false;
    }
    act.image[c] = target;
    act.step[c] = phase_known ? phase : -1;
  }
  std::vector<char> in_image(n, 0);
  for (int c = 0; c < n; ++c) in_image[act.image[c]] = 1;
  for (int c = 0; c < n; ++c) {
    if (!in_image[c]) throw Error(ErrorKind::unsupported, "component map is not a permutation");
  }
  for (int c = 0; c < n; ++c) {
    int m = 0;
    std::int64_t s = 0;
    bool known = true;
    int d = c;
    do {
      known = known && act.step[d] >= 0;
      s += act.step[d];
      d = act.image[d];
      ++m;
    } while (d != c && m <= n);
    act.orbit_length[c] = m;
    act.orbit_shift[c] = known ? static_cast<int>(floor_mod(s, comps[c].period)) : -1;
  }
  return act;
}

}  // namespace cadefect::ca
