#include "cadefect/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cadefect/error.hpp"
#include "json.hpp"

namespace cadefect::io {

using nlohmann::json;
using symbolic::Alphabet;
using symbolic::Symbol;
using symbolic::Word;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::parse, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::parse, std::string("field '") + key + "' has the wrong type");
  }
}

Alphabet alphabet_of(const json& j) {
  if (!j.contains("alphabet")) return Alphabet::binary();
  return Alphabet(get<std::vector<std::string>>(j, "alphabet"));
}

Symbol symbol(const Alphabet& a, const std::string& s) {
  int i = a.index_of(s);
  if (i < 0) throw Error(ErrorKind::parse, "symbol '" + s + "' not in alphabet");
  return static_cast<Symbol>(i);
}

std::vector<Word> words(const Alphabet& a, const json& j, const char* key) {
  std::vector<Word> out;
  for (const auto& s : get<std::vector<std::string>>(j, key)) out.push_back(a.parse(s));
  return out;
}

std::vector<std::pair<Symbol, Symbol>> pairs(const Alphabet& a, const json& j, const char* key) {
  std::vector<std::pair<Symbol, Symbol>> out;
  for (const auto& p : get<std::vector<std::vector<std::string>>>(j, key)) {
    if (p.size() != 2) throw Error(ErrorKind::parse, std::string("entries of '") + key + "' must be pairs");
    out.push_back({symbol(a, p[0]), symbol(a, p[1])});
  }
  return out;
}

std::vector<std::pair<int, int>> neighbourhood(const json& j) {
  if (!j.contains("neighborhood")) return ca::Ca2D::moore();
  std::vector<std::pair<int, int>> h;
  for (const auto& p : get<std::vector<std::vector<int>>>(j, "neighborhood")) {
    if (p.size() != 2) throw Error(ErrorKind::parse, "neighborhood offsets must be [dx, dy]");
    h.push_back({p[0], p[1]});
  }
  return h;
}

std::vector<Symbol> table_of(const Alphabet& a, const json& j) {
  std::vector<Symbol> t;
  const json& tj = j.at("table");
  if (tj.is_string()) {
    for (Symbol s : a.parse(tj.get<std::string>())) t.push_back(s);
  } else {
    for (const auto& s : get<std::vector<std::string>>(j, "table")) t.push_back(symbol(a, s));
  }
  return t;
}

subshift::Subshift1D build_1d(const json& j, const std::string& type, const Alphabet& a) {
  if (type == "sft") {
    if (j.contains("orbits")) return subshift::Subshift1D::from_sft(subshift::sft_from_orbits(a, words(a, j, "orbits")));
    const int r = get<int>(j, "radius");
    if (j.contains("forbidden")) {
      return subshift::Subshift1D::from_sft(subshift::sft_from_forbidden(a, r, words(a, j, "forbidden")));
    }
    return subshift::Subshift1D::from_sft(subshift::SftSpec{a, r, words(a, j, "allowed")});
  }
  if (type == "markov") return subshift::Subshift1D::from_markov(subshift::MarkovSpec{a, pairs(a, j, "transitions")});
  if (type == "sofic") {
    if (j.contains("vertex_labels")) {
      std::vector<Symbol> labels;
      for (const auto& s : get<std::vector<std::string>>(j, "vertex_labels")) labels.push_back(symbol(a, s));
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : get<std::vector<std::vector<int>>>(j, "edges")) {
        if (e.size() != 2) throw Error(ErrorKind::parse, "vertex-labelled edges must be [from, to]");
        edges.push_back({e[0], e[1]});
      }
      return subshift::Subshift1D::from_sofic(subshift::sofic_from_vertex_labels(a, labels, edges));
    }
    subshift::SoficSpec s;
    s.alphabet = a;
    s.state_names = get<std::vector<std::string>>(j, "states");
    s.num_states = static_cast<int>(s.state_names.size());
    auto state = [&](const std::string& n) {
      for (int i = 0; i < s.num_states; ++i) {
        if (s.state_names[i] == n) return i;
      }
      throw Error(ErrorKind::parse, "unknown sofic state '" + n + "'");
    };
    for (const auto& e : get<std::vector<std::vector<std::string>>>(j, "edges")) {
      if (e.size() != 3) throw Error(ErrorKind::parse, "sofic edges must be [from, to, label]");
      s.edges.push_back({state(e[0]), state(e[1]), symbol(a, e[2])});
    }
    return subshift::Subshift1D::from_sofic(s);
  }
  throw Error(ErrorKind::parse, "unknown subshift type '" + type + "'");
}

}  // namespace

LoadedSubshift parse_subshift(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorKind::parse, "subshift file must hold an object");
  LoadedSubshift out;
  out.name = j.value("name", "");
  const Alphabet a = alphabet_of(j);
  const auto type = get<std::string>(j, "type");
  if (type == "wang") {
    out.two.emplace(subshift::WangSpec{a, pairs(a, j, "horizontal"), pairs(a, j, "vertical")});
    out.box = j.value("box", 2);
    return out;
  }
  out.one = build_1d(j, type, a);
  if (j.contains("radius") && type != "sft") out.one->set_radius(get<int>(j, "radius"));
  if (j.contains("names")) {
    for (const auto& [name, period] : j.at("names").items()) {
      if (!period.is_string()) throw Error(ErrorKind::parse, "component names map to periodic words");
      const int c = out.one->component_of_periodic(a.parse(period.get<std::string>()));
      if (c < 0) throw Error(ErrorKind::parse, "named word '" + period.get<std::string>() + "' meets no single component");
      out.one->name_component(c, name);
    }
  }
  if (j.contains("marker")) {
    const json& mj = j.at("marker");
    subshift::MarkerTable m;
    m.period = get<int>(mj, "period");
    if (m.period <= 0) throw Error(ErrorKind::parse, "marker period must be positive");
    for (const auto& e : mj.at("entries")) m.entries.push_back({a.parse(get<std::string>(e, "pattern")), get<int>(e, "phase")});
    out.one->set_marker(m);
  }
  return out;
}

LoadedRule parse_rule(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorKind::parse, "rule file must hold an object");
  LoadedRule out;
  out.name = j.value("name", "");
  const auto type = get<std::string>(j, "type");
  if (type == "eca") {
    out.one = ca::Ca1D::from_eca_number(get<int>(j, "number"));
    if (out.name.empty()) out.name = "eca" + std::to_string(get<int>(j, "number"));
  } else if (type == "table1d") {
    const Alphabet a = alphabet_of(j);
    out.one = ca::Ca1D(a, get<int>(j, "radius"), table_of(a, j));
  } else if (type == "voter") {
    std::int64_t num = 1, den = 2;
    if (j.contains("theta")) {
      const json& t = j.at("theta");
      if (t.is_array()) {
        auto v = t.get<std::vector<std::int64_t>>();
        if (v.size() != 2) throw Error(ErrorKind::parse, "theta as [num, den]");
        num = v[0];
        den = v[1];
      } else if (t.is_number()) {
        den = 1000000;
        num = std::llround(t.get<double>() * static_cast<double>(den));
      } else {
        throw Error(ErrorKind::parse, "theta must be a number or [num, den]");
      }
    }
    out.two = ca::Ca2D::voter(num, den, neighbourhood(j));
  } else if (type == "antiferro") {
    out.two = ca::Ca2D::antiferro(neighbourhood(j));
  } else if (type == "table2d") {
    ca::Ca2D c;
    c.kind = ca::Ca2D::Kind::table;
    c.alphabet = alphabet_of(j);
    c.neighbourhood = neighbourhood(j);
    c.table = table_of(c.alphabet, j);
    std::size_t expected = 1;
    for (std::size_t i = 0; i < c.neighbourhood.size(); ++i) expected *= c.alphabet.size();
    if (c.table.size() != expected) throw Error(ErrorKind::parse, "table2d needs k^|H| entries");
    out.two = c;
  } else {
    throw Error(ErrorKind::parse, "unknown rule type '" + type + "'");
  }
  if (out.name.empty()) out.name = type;
  return out;
}

LoadedConfig parse_config(const std::string& text, const Alphabet& a) {
  const json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorKind::parse, "config file must hold an object");
  LoadedConfig out;
  const auto kind = get<std::string>(j, "kind");
  if (kind == "ep") {
    out.kind = LoadedConfig::Kind::ep;
    out.ep.left = a.parse(get<std::string>(j, "left"));
    out.ep.center = a.parse(j.value("center", ""));
    out.ep.right = a.parse(get<std::string>(j, "right"));
    out.ep.anchor = j.value("anchor", std::int64_t{0});
    if (out.ep.left.empty() || out.ep.right.empty()) throw Error(ErrorKind::parse, "tails must be nonempty");
  } else if (kind == "cyclic") {
    out.kind = LoadedConfig::Kind::cyclic;
    out.cyclic.word = a.parse(get<std::string>(j, "word"));
    if (out.cyclic.word.empty()) throw Error(ErrorKind::parse, "cyclic word must be nonempty");
  } else if (kind == "grid") {
    out.kind = LoadedConfig::Kind::grid;
    const int w = get<int>(j, "width");
    const int h = get<int>(j, "height");
    const auto rows = get<std::vector<std::string>>(j, "rows");
    if (w <= 0 || h <= 0 || static_cast<int>(rows.size()) != h) throw Error(ErrorKind::parse, "grid needs height rows");
    out.grid = symbolic::Grid2D(w, h);
    for (int i = 0; i < h; ++i) {
      Word row = a.parse(rows[i]);
      if (static_cast<int>(row.size()) != w) throw Error(ErrorKind::parse, "grid row has the wrong width");
      // rows are listed top to bottom
      for (int x = 0; x < w; ++x) out.grid.set(x, h - 1 - i, row[x]);
    }
  } else {
    throw Error(ErrorKind::parse, "unknown config kind '" + kind + "'");
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedSubshift load_subshift(const std::string& path) { return parse_subshift(read_file(path)); }
LoadedRule load_rule(const std::string& path) { return parse_rule(read_file(path)); }
LoadedConfig load_config(const std::string& path, const Alphabet& a) { return parse_config(read_file(path), a); }

}  // namespace cadefect::io
