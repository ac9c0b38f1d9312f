#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cadefect/symbolic.hpp"

namespace cadefect::subshift {

using symbolic::Alphabet;
using symbolic::EpConfig;
using symbolic::Grid2D;
using symbolic::Symbol;
using symbolic::Word;

struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> succ;

  Digraph() = default;
  explicit Digraph(int vertices) : n(vertices), succ(vertices) {}
  void add_edge(int a, int b) { succ[a].push_back(b); }
  std::vector<std::vector<int>> predecessors() const;
};

struct SftSpec {
  Alphabet alphabet;
  int radius = 1;
  std::vector<Word> allowed;  // blocks of length 2*radius+1
};

struct MarkovSpec {
  Alphabet alphabet;
  std::vector<std::pair<Symbol, Symbol>> transitions;

  Digraph graph() const;
};

struct SoficEdge {
  int from = 0;
  int to = 0;
  Symbol label = 0;
};

struct SoficSpec {
  Alphabet alphabet;
  int num_states = 0;
  std::vector<std::string> state_names;
  std::vector<SoficEdge> edges;
};

// Vertex-labelled digraph to edge-labelled form: each edge carries its target's label.
SoficSpec sofic_from_vertex_labels(const Alphabet& alphabet, const std::vector<Symbol>& vertex_labels,
                                   const std::vector<std::pair<int, int>>& edges);
SftSpec sft_from_forbidden(const Alphabet& alphabet, int radius, const std::vector<Word>& forbidden);
// Smallest radius whose block graph is exactly the union of the orbit cycles.
SftSpec sft_from_orbits(const Alphabet& alphabet, const std::vector<Word>& orbits);

struct RecodedMarkov {
  int radius = 1;
  std::vector<Word> blocks;  // sorted; state i is blocks[i]
  Digraph graph;

  int index_of(const Word& block) const;  // -1 when not a state
  std::vector<int> encode(const Word& w) const;
  Word decode(const std::vector<int>& path) const;
};

RecodedMarkov recode_to_markov(const SftSpec& spec);

struct Decomposition {
  std::vector<std::vector<int>> components;  // recurrent SCCs ordered by least member
  std::vector<int> transient;
};

Decomposition transitive_decomposition(const Digraph& g);

struct Phases {
  int period = 1;
  std::vector<int> phase;  // per vertex; -1 outside the component
};

Phases period_and_phases(const Digraph& g, const std::vector<int>& component);
bool reachable_in_time(const Digraph& g, int a, int c, std::int64_t t);

class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(int n) : n_(n), bits_((n + 63) / 64, 0) {}

  int size() const { return n_; }
  void set(int i) { bits_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (bits_[i >> 6] >> (i & 63)) & 1u; }
  bool any() const;
  int count() const;
  StateSet& operator&=(const StateSet& o);
  StateSet& operator|=(const StateSet& o);
  bool operator==(const StateSet& o) const { return bits_ == o.bits_; }
  bool operator<(const StateSet& o) const { return bits_ < o.bits_; }
  std::vector<int> members() const;
  const std::vector<std::uint64_t>& words() const { return bits_; }
  std::vector<std::uint64_t>& words() { return bits_; }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct TransitiveComponent {
  int id = 0;
  std::string name;
  std::vector<int> states;  // vertices of the presentation
  std::vector<Symbol> symbols;
  int period = 1;
  // Single cycle whose label word has primitive period equal to its length.
  bool finite_orbit = false;
  Word orbit_word;  // labels read around the cycle from the least state (phase 0)
};

// f(a) = lambda^(phase - p) when pattern occurs at coordinate p, lambda = exp(2 pi i / period).
struct MarkerEntry {
  Word pattern;
  int phase = 0;
};

struct MarkerTable {
  int period = 0;
  std::vector<MarkerEntry> entries;
  bool empty() const { return entries.empty(); }
};

// One-dimensional subshift as a vertex-labelled digraph; points are bi-infinite paths.
class Subshift1D {
 public:
  enum class Kind { sft, markov, sofic };

  static Subshift1D from_sft(const SftSpec& spec);
  static Subshift1D from_markov(const MarkovSpec& spec);
  static Subshift1D from_sofic(const SoficSpec& spec);

  Kind kind() const { return kind_; }
  const Alphabet& alphabet() const { return alphabet_; }
  int radius() const { return radius_; }
  void set_radius(int r) { radius_ = r; }
  const SftSpec* sft() const { return kind_ == Kind::sft ? &sft_ : nullptr; }

  int num_vertices() const { return graph_.n; }
  const Digraph& graph() const { return graph_; }
  Symbol vertex_label(int v) const { return vlabel_[v]; }
  const std::string& vertex_name(int v) const { return vname_[v]; }
  bool essential(int v) const { return essential_.test(v); }

  const std::vector<TransitiveComponent>& components() const { return components_; }
  const std::vector<int>& transient_vertices() const { return transient_; }
  int component_of(int v) const { return vcomp_[v]; }
  int phase_of(int v) const { return vphase_[v]; }
  int component_by_name(const std::string& name) const;
  void name_component(int id, const std::string& name) { components_.at(id).name = name; }
  // Component met by the periodic point period^inf, -1 if none or several.
  int component_of_periodic(const Word& period) const;

  const MarkerTable& marker() const { return marker_; }
  void set_marker(MarkerTable m) { marker_ = std::move(m); }

  bool admissible(const Symbol* w, std::size_t n) const;
  bool admissible(const Word& w) const { return admissible(w.data(), w.size()); }
  // Possible presentation states at each position (empty sets when w is inadmissible).
  std::vector<StateSet> possible_states(const Word& w) const;
  bool contains_periodic(const Word& period) const;
  bool contains(const EpConfig& c) const;
  std::vector<Word> language(std::size_t n) const;

  StateSet empty_set() const { return StateSet(graph_.n); }
  StateSet all_with_label(Symbol s) const { return label_sets_[s]; }
  StateSet step_forward(const StateSet& s, Symbol next) const;
  StateSet step_backward(const StateSet& s, Symbol prev) const;
  // States at the last cell of the left-infinite tail ...period period.
  StateSet left_tail_states(const Word& period) const;
  // States at the first cell of the right-infinite tail period period ...
  StateSet right_tail_states(const Word& period) const;

 private:
  void finish();

  Kind kind_ = Kind::sft;
  Alphabet alphabet_;
  int radius_ = 1;
  SftSpec sft_;
  Digraph graph_;
  std::vector<std::vector<int>> pred_;
  std::vector<Symbol> vlabel_;
  std::vector<std::string> vname_;
  StateSet essential_;
  std::vector<StateSet> label_sets_;
  std::vector<StateSet> succ_sets_;
  std::vector<StateSet> pred_sets_;
  std::vector<std::uint64_t> succ64_;
  std::vector<std::uint64_t> label64_;
  std::vector<TransitiveComponent> components_;
  std::vector<int> transient_;
  std::vector<int> vcomp_;
  std::vector<int> vphase_;
  MarkerTable marker_;
};

struct WangSpec {
  Alphabet alphabet;
  std::vector<std::pair<Symbol, Symbol>> horizontal;  // (left, right)
  std::vector<std::pair<Symbol, Symbol>> vertical;    // (below, above)
};

struct PeriodicPattern2D {
  int component = 0;
  Grid2D tile;  // one fundamental box, read with wraparound
};

class Shift2D {
 public:
  explicit Shift2D(WangSpec spec);

  const WangSpec& spec() const { return spec_; }
  const Alphabet& alphabet() const { return spec_.alphabet; }
  bool horizontal_ok(Symbol left, Symbol right) const { return h_[left * k_ + right]; }
  bool vertical_ok(Symbol below, Symbol above) const { return v_[below * k_ + above]; }
  // Rectangle [x0..x1] x [y0..y1] of g: local rules inside plus one ring of extension.
  bool patch_admissible(const Grid2D& g, int x0, int y0, int x1, int y1) const;
  // Valid box-periodic tilings, grouped into shift orbits (component ids ascending).
  std::vector<PeriodicPattern2D> periodic_patterns(int box) const;

 private:
  WangSpec spec_;
  int k_ = 0;
  std::vector<char> h_;
  std::vector<char> v_;
};

}  // namespace cadefect::subshift
