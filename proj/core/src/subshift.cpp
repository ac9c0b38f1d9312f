#include "cadefect/subshift.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "cadefect/error.hpp"

namespace cadefect::subshift {

std::vector<std::vector<int>> Digraph::predecessors() const {
  std::vector<std::vector<int>> pred(n);
  for (int a = 0; a < n; ++a) {
    for (int b : succ[a]) pred[b].push_back(a);
  }
  return pred;
}

Digraph MarkovSpec::graph() const {
  Digraph g(alphabet.size());
  std::set<std::pair<Symbol, Symbol>> seen;
  for (auto [a, b] : transitions) {
    if (a >= alphabet.size() || b >= alphabet.size()) throw Error(ErrorKind::parse, "transition uses unknown symbol");
    if (seen.insert({a, b}).second) g.add_edge(a, b);
  }
  return g;
}

SoficSpec sofic_from_vertex_labels(const Alphabet& alphabet, const std::vector<Symbol>& vertex_labels,
                                   const std::vector<std::pair<int, int>>& edges) {
  SoficSpec s;
  s.alphabet = alphabet;
  s.num_states = static_cast<int>(vertex_labels.size());
  for (int i = 0; i < s.num_states; ++i) s.state_names.push_back("v" + std::to_string(i));
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= s.num_states || b >= s.num_states) throw Error(ErrorKind::parse, "edge uses unknown vertex");
    s.edges.push_back({a, b, vertex_labels[b]});
  }
  return s;
}

namespace {

void all_words(int k, std::size_t n, Word& cur, std::vector<Word>& out) {
  if (cur.size() == n) {
    out.push_back(cur);
    return;
  }
  for (int a = 0; a < k; ++a) {
    cur.push_back(static_cast<Symbol>(a));
    all_words(k, n, cur, out);
    cur.pop_back();
  }
}

bool contains_factor(const Word& w, const Word& f) {
  if (f.size() > w.size()) return false;
  return std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end();
}

}  // namespace

SftSpec sft_from_forbidden(const Alphabet& alphabet, int radius, const std::vector<Word>& forbidden) {
  if (radius < 1) throw Error(ErrorKind::parse, "sft radius must be at least 1");
  const std::size_t len = 2 * static_cast<std::size_t>(radius) + 1;
  for (const Word& f : forbidden) {
    if (f.empty() || f.size() > len) throw Error(ErrorKind::parse, "forbidden word longer than the block length");
  }
  if (std::pow(alphabet.size(), len) > 4e6) throw Error(ErrorKind::unsupported, "block set too large to enumerate");
  std::vector<Word> words;
  Word cur;
  all_words(alphabet.size(), len, cur, words);
  SftSpec s{alphabet, radius, {}};
  for (const Word& w : words) {
    bool bad = false;
    for (const Word& f : forbidden) bad = bad || contains_factor(w, f);
    if (!bad) s.allowed.push_back(w);
  }
  return s;
}

SftSpec sft_from_orbits(const Alphabet& alphabet, const std::vector<Word>& orbits) {
  if (orbits.empty()) throw Error(ErrorKind::parse, "no orbit words given");
  std::size_t longest = 0;
  std::set<std::vector<Word>> distinct;
  for (const Word& o : orbits) {
    if (o.empty()) throw Error(ErrorKind::parse, "empty orbit word");
    longest = std::max(longest, o.size());
  }
  for (int r = 1; r <= static_cast<int>(longest) + 1; ++r) {
    const std::size_t len = 2 * static_cast<std::size_t>(r) + 1;
    std::set<Word> blocks;
    for (const Word& o : orbits) {
      for (std::size_t i = 0; i < o.size(); ++i) {
        Word b(len);
        for (std::size_t j = 0; j < len; ++j) b[j] = o[(i + j) % o.size()];
        blocks.insert(b);
      }
    }
    SftSpec s{alphabet, r, {blocks.begin(), blocks.end()}};
    Subshift1D x = Subshift1D::from_sft(s);
    bool ok = x.transient_vertices().empty();
    for (const auto& c : x.components()) ok = ok && c.finite_orbit;
    // every orbit word must be a point, and nothing else may be
    std::set<int> hit;
    for (const Word& o : orbits) {
      int c = x.component_of_periodic(o);
      if (c < 0) ok = false;
      else if (x.components()[c].orbit_word.size() != symbolic::primitive_period(o)) ok = false;
      else hit.insert(c);
    }
    ok = ok && hit.size() == x.components().size();
    if (ok) return s;
  }
  throw Error(ErrorKind::unsupported, "orbit words do not define a finite-type union of cycles");
}

int RecodedMarkov::index_of(const Word& block) const {
  auto it = std::lower_bound(blocks.begin(), blocks.end(), block);
  if (it == blocks.end() || *it != block) return -1;
  return static_cast<int>(it - blocks.begin());
}

std::vector<int> RecodedMarkov::encode(const Word& w) const {
  const std::size_t len = 2 * static_cast<std::size_t>(radius) + 1;
  std::vector<int> path;
  if (w.size() < len) return path;
  for (std::size_t i = 0; i + len <= w.size(); ++i) {
    int idx = index_of(Word(w.begin() + i, w.begin() + i + len));
    if (idx < 0) throw Error(ErrorKind::inadmissible, "word contains a block outside the allowed set");
    path.push_back(idx);
  }
  return path;
}

Word RecodedMarkov::decode(const std::vector<int>& path) const {
  Word w;
  if (path.empty()) return w;
  w = blocks.at(path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Word& prev = blocks.at(path[i - 1]);
    const Word& b = blocks.at(path[i]);
    if (!std::equal(prev.begin() + 1, prev.end(), b.begin())) throw Error(ErrorKind::invalid_argument, "block path does not overlap");
    w.push_back(b.back());
  }
  return w;
}

RecodedMarkov recode_to_markov(const SftSpec& spec) {
  if (spec.allowed.empty()) throw Error(ErrorKind::invalid_argument, "empty allowed block set");
  const std::size_t len = 2 * static_cast<std::size_t>(spec.radius) + 1;
  RecodedMarkov m;
  m.radius = spec.radius;
  std::set<Word> uniq;
  for (const Word& b : spec.allowed) {
    if (b.size() != len) throw Error(ErrorKind::parse, "allowed block has wrong length");
    for (Symbol s : b) {
      if (s >= spec.alphabet.size()) throw Error(ErrorKind::parse, "allowed block uses unknown symbol");
    }
    uniq.insert(b);
  }
  m.blocks.assign(uniq.begin(), uniq.end());
  m.graph = Digraph(static_cast<int>(m.blocks.size()));
  // index blocks by their (len-1)-prefix to find overlaps
  std::map<Word, std::vector<int>> by_prefix;
  for (std::size_t i = 0; i < m.blocks.size(); ++i) {
    by_prefix[Word(m.blocks[i].begin(), m.blocks[i].end() - 1)].push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < m.blocks.size(); ++i) {
    auto it = by_prefix.find(Word(m.blocks[i].begin() + 1, m.blocks[i].end()));
    if (it == by_prefix.end()) continue;
    for (int j : it->second) m.graph.add_edge(static_cast<int>(i), j);
  }
  return m;
}

Decomposition transitive_decomposition(const Digraph& g) {
  const int n = g.n;
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> sccs;
  int counter = 0;
  std::vector<std::pair<int, std::size_t>> work;
  for (int s = 0; s < n; ++s) {
    if (index[s] >= 0) continue;
    work.push_back({s, 0});
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = 1;
    while (!work.empty()) {
      auto& [v, ei] = work.back();
      if (ei < g.succ[v].size()) {
        int w = g.succ[v][ei++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      int done = v;
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        sccs.push_back(std::move(comp));
      }
    }
  }
  Decomposition d;
  for (auto& comp : sccs) {
    bool recurrent = comp.size() > 1;
    if (!recurrent) {
      int v = comp[0];
      recurrent = std::find(g.succ[v].begin(), g.succ[v].end(), v) != g.succ[v].end();
    }
    if (recurrent) d.components.push_back(comp);
    else d.transient.push_back(comp[0]);
  }
  std::sort(d.components.begin(), d.components.end());
  std::sort(d.transient.begin(), d.transient.end());
  return d;
}

Phases period_and_phases(const Digraph& g, const std::vector<int>& component) {
  if (component.empty()) throw Error(ErrorKind::invalid_argument, "empty component");
  std::vector<char> in(g.n, 0);
  for (int v : component) in[v] = 1;
  std::vector<int> level(g.n, -1);
  const int root = *std::min_element(component.begin(), component.end());
  std::queue<int> q;
  level[root] = 0;
  q.push(root);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.succ[u]) {
      if (in[v] && level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      }
    }
  }
  int p = 0;
  for (int u : component) {
    if (level[u] < 0) throw Error(ErrorKind::invalid_argument, "component is not strongly connected");
    for (int v : g.succ[u]) {
      if (in[v]) p = std::gcd(p, std::abs(level[u] + 1 - level[v]));
    }
  }
  Phases out;
  out.period = p == 0 ? 1 : p;
  out.phase.assign(g.n, -1);
  for (int u : component) out.phase[u] = level[u] % out.period;
  return out;
}

bool reachable_in_time(const Digraph& g, int a, int c, std::int64_t t) {
  if (a < 0 || a >= g.n || c < 0 || c >= g.n) throw Error(ErrorKind::invalid_argument, "unknown state");
  if (t < 0) throw Error(ErrorKind::invalid_argument, "negative time");
  StateSet cur(g.n);
  cur.set(a);
  std::map<StateSet, std::int64_t> seen;
  std::vector<StateSet> history;
  for (std::int64_t step = 0;; ++step) {
    if (step == t) return cur.test(c);
    auto it = seen.find(cur);
    if (it != seen.end()) {
      const std::int64_t start = it->second;
      const std::int64_t cycle = step - start;
      return history[start + (t - start) % cycle].test(c);
    }
    seen.emplace(cur, step);
    history.push_back(cur);
    StateSet next(g.n);
    for (int v : cur.members()) {
      for (int w : g.succ[v]) next.set(w);
    }
    cur = next;
  }
}

bool StateSet::any() const {
  for (auto w : bits_) {
    if (w) return true;
  }
  return false;
}

int StateSet::count() const {
  int c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

StateSet& StateSet::operator&=(const StateSet& o) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

StateSet& StateSet::operator|=(const StateSet& o) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

std::vector<int> StateSet::members() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    std::uint64_t w = bits_[i];
    while (w) {
      int b = std::countr_zero(w);
      out.push_back(static_cast<int>(i * 64 + b));
      w &= w - 1;
    }
  }
  return out;
}

Subshift1D Subshift1D::from_sft(const SftSpec& spec) {
  RecodedMarkov m = recode_to_markov(spec);
  Subshift1D x;
  x.kind_ = Kind::sft;
  x.alphabet_ = spec.alphabet;
  x.radius_ = spec.radius;
  x.sft_ = spec;
  x.sft_.allowed = m.blocks;
  x.graph_ = m.graph;
  for (const Word& b : m.blocks) {
    x.vlabel_.push_back(b[spec.radius]);
    x.vname_.push_back(spec.alphabet.format(b));
  }
  x.finish();
  return x;
}

Subshift1D Subshift1D::from_markov(const MarkovSpec& spec) {
  Subshift1D x;
  x.kind_ = Kind::markov;
  x.alphabet_ = spec.alphabet;
  x.radius_ = 1;
  x.graph_ = spec.graph();
  for (int a = 0; a < spec.alphabet.size(); ++a) {
    x.vlabel_.push_back(static_cast<Symbol>(a));
    x.vname_.push_back(spec.alphabet.label(static_cast<Symbol>(a)));
  }
  x.finish();
  return x;
}

Subshift1D Subshift1D::from_sofic(const SoficSpec& spec) {
  if (spec.num_states <= 0) throw Error(ErrorKind::parse, "sofic graph has no states");
  if (spec.edges.empty()) throw Error(ErrorKind::parse, "sofic graph has no edges");
  Subshift1D x;
  x.kind_ = Kind::sofic;
  x.alphabet_ = spec.alphabet;
  x.radius_ = 1;
  const int m = static_cast<int>(spec.edges.size());
  x.graph_ = Digraph(m);
  auto state_name = [&](int s) {
    return s < static_cast<int>(spec.state_names.size()) ? spec.state_names[s] : std::to_string(s);
  };
  for (int i = 0; i < m; ++i) {
    const SoficEdge& e = spec.edges[i];
    if (e.from < 0 || e.to < 0 || e.from >= spec.num_states || e.to >= spec.num_states) {
      throw Error(ErrorKind::parse, "sofic edge uses unknown state");
    }
    if (e.label >= spec.alphabet.size()) throw Error(ErrorKind::parse, "sofic edge label not in alphabet");
    x.vlabel_.push_back(e.label);
    x.vname_.push_back(state_name(e.from) + ">" + state_name(e.to) + ":" + spec.alphabet.label(e.label));
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (spec.edges[i].to == spec.edges[j].from) x.graph_.add_edge(i, j);
    }
  }
  x.finish();
  return x;
}

void Subshift1D::finish() {
  const int n = graph_.n;
  pred_ = graph_.predecessors();
  Decomposition d = transitive_decomposition(graph_);

  // essential = reachable from a recurrent vertex and reaching one
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::queue<int> q;
  for (const auto& comp : d.components) {
    for (int v : comp) {
      fwd[v] = bwd[v] = 1;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (fwd[v]) q.push(v);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : graph_.succ[u]) {
      if (!fwd[v]) {
        fwd[v] = 1;
        q.push(v);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (bwd[v]) q.push(v);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : pred_[u]) {
      if (!bwd[v]) {
        bwd[v] = 1;
        q.push(v);
      }
    }
  }
  essential_ = StateSet(n);
  for (int v = 0; v < n; ++v) {
    if (fwd[v] && bwd[v]) essential_.set(v);
  }

  const int k = alphabet_.size();
  label_sets_.assign(k, StateSet(n));
  succ_sets_.assign(n, StateSet(n));
  pred_sets_.assign(n, StateSet(n));
  for (int v = 0; v < n; ++v) {
    if (!essential_.test(v)) continue;
    label_sets_[vlabel_[v]].set(v);
    for (int w : graph_.succ[v]) {
      if (essential_.test(w)) {
        succ_sets_[v].set(w);
        pred_sets_[w].set(v);
      }
    }
  }
  if (n <= 64) {
    succ64_.assign(n, 0);
    label64_.assign(k, 0);
    for (int v = 0; v < n; ++v) succ64_[v] = n ? succ_sets_[v].words()[0] : 0;
    for (int a = 0; a < k; ++a) label64_[a] = n ? label_sets_[a].words()[0] : 0;
  }

  vcomp_.assign(n, -1);
  vphase_.assign(n, -1);
  components_.clear();
  for (std::size_t c = 0; c < d.components.size(); ++c) {
    const auto& members = d.components[c];
    TransitiveComponent tc;
    tc.id = static_cast<int>(c);
    tc.name = "C" + std::to_string(c);
    tc.states = members;
    Phases ph = period_and_phases(graph_, members);
    tc.period = ph.period;
    std::set<Symbol> syms;
    std::vector<char> in(n, 0);
    for (int v : members) {
      in[v] = 1;
      syms.insert(vlabel_[v]);
      vcomp_[v] = tc.id;
      vphase_[v] = ph.phase[v];
    }
    tc.symbols.assign(syms.begin(), syms.end());
    bool cycle = true;
    for (int v : members) {
      int inside = 0;
      for (int w : graph_.succ[v]) inside += in[w];
      cycle = cycle && inside == 1;
    }
    if (cycle) {
      Word w;
      int v = members.front();
      for (std::size_t i = 0; i < members.size(); ++i) {
        w.push_back(vlabel_[v]);
        for (int nx : graph_.succ[v]) {
          if (in[nx]) {
            v = nx;
            break;
          }
        }
      }
      if (symbolic::primitive_period(w) == w.size()) {
        tc.finite_orbit = true;
        tc.orbit_word = w;
      }
    }
    components_.push_back(std::move(tc));
  }
  transient_.clear();
  for (int v : d.transient) transient_.push_back(v);
}

int Subshift1D::component_by_name(const std::string& name) const {
  for (const auto& c : components_) {
    if (c.name == name) return c.id;
  }
  return -1;
}

int Subshift1D::component_of_periodic(const Word& period) const {
  if (period.empty()) return -1;
  StateSet s = left_tail_states(period);
  int comp = -2;
  for (int v : s.members()) {
    int c = vcomp_[v];
    if (c < 0) return -1;
    if (comp == -2) comp = c;
    else if (comp != c) return -1;
  }
  return comp < 0 ? -1 : comp;
}

StateSet Subshift1D::step_forward(const StateSet& s, Symbol next) const {
  StateSet out(graph_.n);
  for (int v : s.members()) out |= succ_sets_[v];
  out &= label_sets_[next];
  return out;
}

StateSet Subshift1D::step_backward(const StateSet& s, Symbol prev) const {
  StateSet out(graph_.n);
  for (int v : s.members()) out |= pred_sets_[v];
  out &= label_sets_[prev];
  return out;
}

bool Subshift1D::admissible(const Symbol* w, std::size_t n) const {
  if (!essential_.any()) return false;
  if (n == 0) return true;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] >= alphabet_.size()) throw Error(ErrorKind::invalid_argument, "symbol outside alphabet");
  }
  if (graph_.n <= 64) {
    std::uint64_t cur = label64_[w[0]];
    for (std::size_t i = 1; i < n && cur; ++i) {
      std::uint64_t nxt = 0;
      std::uint64_t bits = cur;
      while (bits) {
        nxt |= succ64_[std::countr_zero(bits)];
        bits &= bits - 1;
      }
      cur = nxt & label64_[w[i]];
    }
    return cur != 0;
  }
  StateSet cur = label_sets_[w[0]];
  for (std::size_t i = 1; i < n; ++i) {
    cur = step_forward(cur, w[i]);
    if (!cur.any()) return false;
  }
  return cur.any();
}

std::vector<StateSet> Subshift1D::possible_states(const Word& w) const {
  const std::size_t n = w.size();
  std::vector<StateSet> fwd(n, StateSet(graph_.n));
  if (n == 0) return fwd;
  fwd[0] = label_sets_[w[0]];
  for (std::size_t i = 1; i < n; ++i) fwd[i] = step_forward(fwd[i - 1], w[i]);
  if (!fwd[n - 1].any()) return std::vector<StateSet>(n, StateSet(graph_.n));
  StateSet back = fwd[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    back = step_backward(back, w[i]);
    fwd[i] &= back;
    back = fwd[i];
  }
  return fwd;
}

StateSet Subshift1D::left_tail_states(const Word& period) const {
  StateSet x = label_sets_[period.back()];
  while (true) {
    StateSet y = x;
    for (Symbol s : period) y = step_forward(y, s);
    if (y == x) return x;
    x = y;
  }
}

StateSet Subshift1D::right_tail_states(const Word& period) const {
  StateSet x = label_sets_[period.front()];
  while (true) {
    StateSet y = x;
    for (std::size_t i = period.size(); i-- > 0;) y = step_backward(y, period[i]);
    if (y == x) return x;
    x = y;
  }
}

bool Subshift1D::contains_periodic(const Word& period) const {
  if (period.empty()) return false;
  return left_tail_states(period).any();
}

bool Subshift1D::contains(const EpConfig& c) const {
  StateSet s = left_tail_states(c.left);
  if (!s.any()) return false;
  for (Symbol a : c.center) {
    s = step_forward(s, a);
    if (!s.any()) return false;
  }
  std::set<StateSet> seen;
  while (seen.insert(s).second) {
    for (Symbol a : c.right) {
      s = step_forward(s, a);
      if (!s.any()) return false;
    }
  }
  return true;
}

namespace {

void extend_language(const Subshift1D& x, const StateSet& cur, Word& w, std::size_t n, std::vector<Word>& out) {
  if (w.size() == n) {
    out.push_back(w);
    return;
  }
  for (int a = 0; a < x.alphabet().size(); ++a) {
    StateSet next = w.empty() ? x.all_with_label(static_cast<Symbol>(a)) : x.step_forward(cur, static_cast<Symbol>(a));
    if (!next.any()) continue;
    w.push_back(static_cast<Symbol>(a));
    extend_language(x, next, w, n, out);
    w.pop_back();
  }
}

}  // namespace

std::vector<Word> Subshift1D::language(std::size_t n) const {
  std::vector<Word> out;
  if (!essential_.any()) return out;
  Word w;
  extend_language(*this, StateSet(graph_.n), w, n, out);
  return out;
}

Shift2D::Shift2D(WangSpec spec) : spec_(std::move(spec)) {
  k_ = spec_.alphabet.size();
  if (k_ > 64) throw Error(ErrorKind::unsupported, "2D alphabets are limited to 64 symbols");
  h_.assign(k_ * k_, 0);
  v_.assign(k_ * k_, 0);
  for (auto [a, b] : spec_.horizontal) {
    if (a >= k_ || b >= k_) throw Error(ErrorKind::parse, "horizontal pair uses unknown symbol");
    h_[a * k_ + b] = 1;
  }
  for (auto [a, b] : spec_.vertical) {
    if (a >= k_ || b >= k_) throw Error(ErrorKind::parse, "vertical pair uses unknown symbol");
    v_[a * k_ + b] = 1;
  }
}

bool Shift2D::patch_admissible(const Grid2D& g, int x0, int y0, int x1, int y1) const {
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (x < x1 && !horizontal_ok(g.at(x, y), g.at(x + 1, y))) return false;
      if (y < y1 && !vertical_ok(g.at(x, y), g.at(x, y + 1))) return false;
    }
  }
  // one ring of existential extension, by arc consistency
  const int w = x1 - x0 + 3;
  const int h = y1 - y0 + 3;
  const std::uint64_t full = k_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << k_) - 1);
  std::vector<std::uint64_t> dom(static_cast<std::size_t>(w) * h, full);
  std::vector<char> fixed(dom.size(), 0);
  auto id = [&](int i, int j) { return static_cast<std::size_t>(j) * w + i; };
  for (int j = 1; j < h - 1; ++j) {
    for (int i = 1; i < w - 1; ++i) {
      dom[id(i, j)] = std::uint64_t{1} << g.at(x0 + i - 1, y0 + j - 1);
      fixed[id(i, j)] = 1;
    }
  }
  auto supported = [&](Symbol a, std::uint64_t other, bool horizontal, bool a_first) {
    for (int b = 0; b < k_; ++b) {
      if (!((other >> b) & 1u)) continue;
      Symbol first = a_first ? a : static_cast<Symbol>(b);
      Symbol second = a_first ? static_cast<Symbol>(b) : a;
      if (horizontal ? horizontal_ok(first, second) : vertical_ok(first, second)) return true;
    }
    return false;
  };
  const long bound = static_cast<long>(w) * h * k_;
  for (long sweep = 0; sweep < bound; ++sweep) {
    bool changed = false;
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        if (fixed[id(i, j)]) continue;
        std::uint64_t d = dom[id(i, j)];
        std::uint64_t keep = 0;
        for (int a = 0; a < k_; ++a) {
          if (!((d >> a) & 1u)) continue;
          bool ok = true;
          if (i > 0) ok = ok && supported(static_cast<Symbol>(a), dom[id(i - 1, j)], true, false);
          if (i + 1 < w) ok = ok && supported(static_cast<Symbol>(a), dom[id(i + 1, j)], true, true);
          if (j > 0) ok = ok && supported(static_cast<Symbol>(a), dom[id(i, j - 1)], false, false);
          if (j + 1 < h) ok = ok && supported(static_cast<Symbol>(a), dom[id(i, j + 1)], false, true);
          if (ok) keep |= std::uint64_t{1} << a;
        }
        if (keep == 0) return false;
        if (keep != d) {
          dom[id(i, j)] = keep;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return true;
}

std::vector<PeriodicPattern2D> Shift2D::periodic_patterns(int box) const {
  if (box < 1 || std::pow(k_, box * box) > 1e6) throw Error(ErrorKind::unsupported, "periodic box too large");
  const int cells = box * box;
  std::vector<Grid2D> valid;
  std::vector<int> digits(cells, 0);
  while (true) {
    Grid2D t(box, box);
    for (int i = 0; i < cells; ++i) t.cells[i] = static_cast<Symbol>(digits[i]);
    bool ok = true;
    for (int y = 0; y < box && ok; ++y) {
      for (int x = 0; x < box && ok; ++x) {
        ok = horizontal_ok(t.at(x, y), t.at_wrapped(x + 1, y)) && vertical_ok(t.at(x, y), t.at_wrapped(x, y + 1));
      }
    }
    if (ok) valid.push_back(t);
    int i = 0;
    while (i < cells && ++digits[i] == k_) digits[i++] = 0;
    if (i == cells) break;
  }
  // canonical representative of each shift orbit: least cell vector
  std::set<std::vector<Symbol>> reps;
  for (const Grid2D& t : valid) {
    std::vector<Symbol> best = t.cells;
    for (int dy = 0; dy < box; ++dy) {
      for (int dx = 0; dx < box; ++dx) {
        std::vector<Symbol> s(cells);
        for (int y = 0; y < box; ++y) {
          for (int x = 0; x < box; ++x) s[y * box + x] = t.at_wrapped(x + dx, y + dy);
        }
        best = std::min(best, s);
      }
    }
    reps.insert(best);
  }
  std::vector<PeriodicPattern2D> out;
  int id = 0;
  for (const auto& r : reps) {
    PeriodicPattern2D p;
    p.component = id++;
    p.tile = Grid2D(box, box);
    p.tile.cells = r;
    out.push_back(p);
  }
  return out;
}

}  // namespace cadefect::subshift
