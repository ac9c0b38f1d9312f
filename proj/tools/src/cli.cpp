#include "cadefect_cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "cadefect/cadefect.hpp"
#include "json.hpp"

namespace cadefect::cli {

using json = nlohmann::ordered_json;
using spectral::Displacement;
using spectral::DisplacementGroup;

namespace {

json manifest(const std::string& command, json inputs, json parameters) {
  json m;
  m["command"] = command;
  m["version"] = kToolVersion;
  m["inputs"] = std::move(inputs);
  m["parameters"] = std::move(parameters);
  return m;
}

json vec_json(Displacement v) { return json::array({v.first, v.second}); }

json group_json(const DisplacementGroup& g) {
  json j;
  j["name"] = g.name();
  j["kind"] = g.kind() == DisplacementGroup::Kind::planar ? "planar" : "spacetime";
  j["order"] = g.order();
  json basis = json::array();
  for (auto v : g.hnf_basis()) basis.push_back(vec_json(v));
  j["kernel_basis"] = basis;
  if (g.kind() == DisplacementGroup::Kind::planar) {
    json red = json::array();
    for (auto v : defect::reduced_basis(g)) red.push_back(vec_json(v));
    j["reduced_basis"] = red;
  }
  return j;
}

json label_json(const DisplacementGroup& g, const std::optional<Displacement>& v) {
  if (!v) return nullptr;
  return g.format(*v);
}

const std::string& comp_name(const subshift::Subshift1D& x, int c) {
  static const std::string none = "?";
  return c >= 0 ? x.components().at(c).name : none;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::parse, "cannot write " + path);
  f << text;
}

// P2 image, rows top to bottom.
std::string pgm(int width, int height, int maxval, const std::vector<int>& values) {
  std::ostringstream s;
  s << "P2\n" << width << " " << height << "\n" << maxval << "\n";
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x) s << ' ';
      s << values[static_cast<std::size_t>(y) * width + x];
    }
    s << '\n';
  }
  return s.str();
}

int heat(int v) { return v < 0 ? 0 : std::min(v, 255); }

struct Loaded1D {
  io::LoadedSubshift sub;
  std::optional<io::LoadedRule> rule;
};

const subshift::Subshift1D& one_d(const io::LoadedSubshift& s) {
  if (!s.one) throw Error(ErrorKind::unsupported, "command needs a one-dimensional subshift");
  return *s.one;
}

const ca::Ca1D& one_d(const io::LoadedRule& r) {
  if (!r.one) throw Error(ErrorKind::unsupported, "command needs a one-dimensional rule");
  return *r.one;
}

json spectrum_2d(const io::LoadedSubshift& s) {
  json j;
  json pats = json::array();
  std::optional<DisplacementGroup> common;
  bool same = true;
  for (const auto& p : s.two->periodic_patterns(s.box)) {
    json pj;
    pj["component"] = p.component;
    json rows = json::array();
    for (int y = p.tile.height - 1; y >= 0; --y) {
      symbolic::Word w;
      for (int x = 0; x < p.tile.width; ++x) w.push_back(p.tile.at(x, y));
      rows.push_back(s.alphabet().format(w));
    }
    pj["tile"] = rows;
    const auto g = defect::periodicity_group(p.tile);
    pj["displacement_group"] = group_json(g);
    if (common && !(*common == g)) same = false;
    if (!common) common = g;
    pats.push_back(pj);
  }
  j["patterns"] = pats;
  if (common && same) {
    j["group"] = common->name();
    j["displacement_group"] = group_json(*common);
  }
  return j;
}

}  // namespace

int requested_threads() {
  const char* v = std::getenv("CADEFECT_THREADS");
  if (!v) return 1;
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

std::string cmd_spectrum(const SpectrumArgs& a) {
  auto sub = io::load_subshift(a.subshift);
  json inputs;
  inputs["subshift"] = a.subshift;
  if (!a.ca.empty()) inputs["ca"] = a.ca;
  json out;
  out["manifest"] = manifest("spectrum", inputs, json::object());
  out["subshift"] = sub.name;
  if (sub.two) {
    out.update(spectrum_2d(sub));
    return dump(out);
  }
  const auto& x = *sub.one;
  std::optional<io::LoadedRule> rule;
  if (!a.ca.empty()) rule = io::load_rule(a.ca);
  if (rule && !(one_d(*rule).alphabet() == x.alphabet())) throw Error(ErrorKind::parse, "CA and subshift alphabets differ");
  spectral::DomainLabeller lab(x, rule ? &one_d(*rule) : nullptr);
  out["radius"] = x.radius();
  json comps = json::array();
  for (const auto& c : x.components()) {
    const auto& ps = lab.phases(c.id);
    json cj;
    cj["name"] = c.name;
    cj["states"] = c.states.size();
    cj["graph_period"] = ps.graph_period;
    cj["locally_determined"] = ps.locally_determined;
    cj["P"] = ps.period;
    json ph = json::array();
    for (int v : c.states) ph.push_back(ps.phase[v] < 0 ? 0 : ps.phase[v]);
    cj["phases"] = ph;
    if (c.finite_orbit) cj["orbit"] = x.alphabet().format(c.orbit_word);
    if (lab.action()) {
      cj["image"] = comp_name(x, lab.action()->image[c.id]);
      if (lab.action()->step[c.id] >= 0) cj["step"] = lab.action()->step[c.id];
    }
    if (ps.rotation) {
      cj["rotation"] = *ps.rotation;
      cj["tau"] = ps.tau_str();
    }
    comps.push_back(cj);
  }
  out["components"] = comps;
  json classes = json::array();
  for (const auto& cl : lab.classes()) {
    json cj;
    json names = json::array();
    json offs = json::array();
    for (std::size_t i = 0; i < cl.components.size(); ++i) {
      names.push_back(comp_name(x, cl.components[i]));
      offs.push_back(vec_json(cl.offset[i]));
    }
    cj["components"] = names;
    cj["offsets"] = offs;
    cj["marker"] = cl.marker;
    cj["group"] = cl.group.name();
    cj["displacement_group"] = group_json(cl.group);
    classes.push_back(cj);
  }
  out["classes"] = classes;
  if (x.components().size() == 1) {
    const auto& ps = lab.phases(0);
    out["P"] = ps.period;
    if (ps.rotation) {
      out["rotation"] = *ps.rotation;
      out["tau"] = ps.tau_str();
    }
  }
  if (lab.classes().size() == 1) {
    out["group"] = lab.classes()[0].group.name();
    out["displacement_group"] = group_json(lab.classes()[0].group);
  }
  return dump(out);
}

std::string cmd_classify(const ClassifyArgs& a) {
  auto sub = io::load_subshift(a.subshift);
  auto cfg = io::load_config(a.config, sub.alphabet());
  json inputs;
  inputs["subshift"] = a.subshift;
  inputs["config"] = a.config;
  if (!a.ca.empty()) inputs["ca"] = a.ca;
  json params;
  params["r"] = a.r;
  json out;
  out["manifest"] = manifest("classify", inputs, params);

  if (cfg.kind == io::LoadedConfig::Kind::grid) {
    if (!sub.two) throw Error(ErrorKind::unsupported, "grid configurations need a two-dimensional subshift");
    const auto rep = defect::classify2d(cfg.grid, *sub.two, a.r, sub.box);
    out["r"] = rep.r;
    out["kind"] = defect::kind_name(rep.kind);
    json doms = json::array();
    for (const auto& d : rep.domains) {
      json dj;
      dj["cells"] = d.cells.size();
      dj["component"] = d.component;
      dj["label"] = d.label ? vec_json(*d.label) : json(nullptr);
      doms.push_back(dj);
    }
    out["domains"] = doms;
    if (rep.group) {
      out["group"] = group_json(*rep.group);
      json m = json::array();
      for (const auto& row : rep.matrix) {
        json mr = json::array();
        for (auto v : row) mr.push_back(rep.group->format(v));
        m.push_back(mr);
      }
      out["matrix"] = m;
      if (rep.matrix.size() == 2) out["displacement"] = rep.group->format(rep.matrix[0][1]);
    }
    if (!a.pgm.empty()) {
      const auto f = defect::defect_field(cfg.grid, *sub.two);
      std::vector<int> vals;
      for (int y = f.height - 1; y >= 0; --y) {
        for (int x = 0; x < f.width; ++x) vals.push_back(heat(f.at(x, y)));
      }
      write_text(a.pgm, pgm(f.width, f.height, 255, vals));
    }
    return dump(out);
  }

  const auto& x = one_d(sub);
  std::optional<io::LoadedRule> rule;
  if (!a.ca.empty()) rule = io::load_rule(a.ca);
  if (rule && !(one_d(*rule).alphabet() == x.alphabet())) throw Error(ErrorKind::parse, "CA and subshift alphabets differ");
  spectral::DomainLabeller lab(x, rule ? &one_d(*rule) : nullptr);

  if (cfg.kind == io::LoadedConfig::Kind::cyclic) {
    const int r = a.r > 0 ? a.r : x.radius() + 1;
    const auto field = defect::defect_field(cfg.cyclic, x);
    json fj = json::array();
    for (int v : field.values) fj.push_back(v == defect::kInfinite || (field.capped && v >= field.cap) ? json("inf") : json(v));
    out["r"] = r;
    out["field"] = fj;
    json blobs = json::array();
    for (const auto& b : tracker::row_blobs(cfg.cyclic, x, lab, r, 2 * r + 1)) {
      json bj;
      bj["start"] = b.cells.start;
      bj["length"] = b.cells.length;
      bj["left"] = comp_name(x, b.left_component);
      bj["right"] = comp_name(x, b.right_component);
      if (b.left_component >= 0 && b.left_component == b.right_component) {
        bj["label"] = label_json(lab.classes()[lab.class_of(b.left_component)].group, b.label);
      } else if (b.left_component >= 0 && b.right_component >= 0 &&
                 lab.class_of(b.left_component) == lab.class_of(b.right_component)) {
        bj["label"] = label_json(lab.classes()[lab.class_of(b.left_component)].group, b.label);
      } else {
        bj["label"] = nullptr;
      }
      blobs.push_back(bj);
    }
    out["defects"] = blobs;
    if (!a.pgm.empty()) {
      std::vector<int> vals;
      for (int v : field.values) vals.push_back(field.bounded(v) ? heat(v) : 255);
      write_text(a.pgm, pgm(static_cast<int>(vals.size()), 1, 255, vals));
    }
    return dump(out);
  }

  const auto& c = cfg.ep;
  const auto rep = defect::classify(c, x, lab, a.r);
  json cj;
  cj["left"] = x.alphabet().format(c.left);
  cj["center"] = x.alphabet().format(c.center);
  cj["right"] = x.alphabet().format(c.right);
  cj["anchor"] = c.anchor;
  out["config"] = cj;
  out["r"] = rep.r;
  out["defect_set"] = rep.defect_set;
  out["kind"] = defect::kind_name(rep.kind);
  json doms = json::array();
  for (const auto& d : rep.decomposition.domains) {
    json dj;
    dj["lo"] = d.unbounded_left ? json("-inf") : json(d.lo);
    dj["hi"] = d.unbounded_right ? json("inf") : json(d.hi);
    dj["projective"] = d.projective;
    dj["component"] = comp_name(x, d.component);
    dj["label"] = d.label ? vec_json(*d.label) : json(nullptr);
    doms.push_back(dj);
  }
  out["domains"] = doms;
  out["signature"] = rep.signature;
  if (rep.group) {
    out["group"] = group_json(*rep.group);
    if (rep.displacement) {
      out["displacement"] = rep.group->format(*rep.displacement);
      out["displacement_vector"] = vec_json(rep.group->reduce(*rep.displacement));
    }
    json m = json::array();
    for (const auto& row : rep.matrix) {
      json mr = json::array();
      for (auto v : row) mr.push_back(rep.group->format(v));
      m.push_back(mr);
    }
    out["matrix"] = m;
  }
  out["essential"] = rep.essential;
  out["removable"] = rep.removable;
  if (!a.pgm.empty()) {
    const std::int64_t lo = c.anchor - 4 * rep.r - 8;
    const std::int64_t hi = c.end() + 4 * rep.r + 8;
    const auto field = defect::defect_field(c, x, lo, hi);
    std::vector<int> vals;
    for (int v : field.values) vals.push_back(v == defect::kInfinite ? 255 : heat(v));
    write_text(a.pgm, pgm(static_cast<int>(vals.size()), 1, 255, vals));
  }
  return dump(out);
}

std::string cmd_track(const TrackArgs& a) {
  auto sub = io::load_subshift(a.subshift);
  auto rule = io::load_rule(a.ca);
  const auto& x = one_d(sub);
  const auto& phi = one_d(rule);
  if (!(phi.alphabet() == x.alphabet())) throw Error(ErrorKind::parse, "CA and subshift alphabets differ");
  symbolic::CyclicConfig init;
  if (!a.init.empty()) {
    auto cfg = io::load_config(a.init, x.alphabet());
    if (cfg.kind != io::LoadedConfig::Kind::cyclic) throw Error(ErrorKind::parse, "--init needs a cyclic configuration");
    init = cfg.cyclic;
  } else {
    if (a.width < 16) throw Error(ErrorKind::parse, "--width must be at least 16");
    init = tracker::random_config(static_cast<std::size_t>(a.width), x.alphabet().size(), a.seed);
  }
  if (init.size() < 16) throw Error(ErrorKind::parse, "torus must have at least 16 cells");
  if (a.steps < 1) throw Error(ErrorKind::parse, "--steps must be positive");
  tracker::TrackerOptions opt;
  opt.r = a.r;
  opt.burn_in = a.burn_in ? *a.burn_in : (a.init.empty() ? 50 : 0);
  if (opt.burn_in < 0 || opt.burn_in >= a.steps) throw Error(ErrorKind::parse, "--burn-in must lie in [0, steps)");
  spectral::DomainLabeller lab(x, &phi);
  const auto res = tracker::track(phi, init, a.steps, x, lab, opt);

  json inputs;
  inputs["ca"] = a.ca;
  inputs["subshift"] = a.subshift;
  if (!a.init.empty()) inputs["init"] = a.init;
  json params;
  params["width"] = init.size();
  params["steps"] = a.steps;
  params["seed"] = a.seed;
  params["burn_in"] = opt.burn_in;
  params["r"] = res.r;
  params["min_domain"] = res.min_domain;
  params["settle"] = opt.settle;
  json out;
  out["manifest"] = manifest("track", inputs, params);
  json groups = json::array();
  for (const auto& cl : lab.classes()) {
    json gj = group_json(cl.group);
    json names = json::array();
    for (int c : cl.components) names.push_back(comp_name(x, c));
    gj["components"] = names;
    groups.push_back(gj);
  }
  out["groups"] = groups;
  json tracks = json::array();
  for (const auto& t : res.tracks) {
    json tj;
    tj["id"] = t.id;
    tj["birth"] = t.birth;
    tj["death"] = t.death;
    tj["left"] = comp_name(x, t.left_component);
    tj["right"] = comp_name(x, t.right_component);
    tj["label_class"] = t.label_class;
    tj["label"] = t.label_class >= 0 ? label_json(lab.classes()[t.label_class].group, t.label) : json(nullptr);
    tj["parents"] = t.parents;
    tj["children"] = t.children;
    json path = json::array();
    for (const auto& iv : t.intervals) path.push_back(json::array({iv.start, iv.length}));
    tj["path"] = path;
    tracks.push_back(tj);
  }
  out["tracks"] = tracks;
  json events = json::array();
  tracker::ConservationReport cons;
  for (const auto& e : res.events) {
    json ej;
    ej["time"] = e.time;
    ej["incoming"] = e.incoming;
    ej["outgoing"] = e.outgoing;
    ej["interface"] = e.interface_event;
    if (e.label_class >= 0) {
      const auto& g = lab.classes()[e.label_class].group;
      ej["incoming_sum"] = label_json(g, e.incoming_sum);
      ej["outgoing_sum"] = label_json(g, e.outgoing_sum);
    }
    ej["verdict"] = tracker::verdict_name(e.verdict);
    if (e.verdict == tracker::Verdict::pass) ++cons.pass;
    if (e.verdict == tracker::Verdict::fail) ++cons.fail;
    if (e.verdict == tracker::Verdict::skip) ++cons.skip;
    events.push_back(ej);
  }
  out["events"] = events;
  json cj;
  cj["pass"] = cons.pass;
  cj["fail"] = cons.fail;
  cj["skip"] = cons.skip;
  out["conservation"] = cj;
  // total displacement per labelled row
  std::optional<std::pair<int, Displacement>> first;
  bool constant = true;
  int labelled = 0;
  for (const auto& s : res.totals) {
    if (!s.total) continue;
    ++labelled;
    if (!first) {
      first = {s.label_class, *s.total};
    } else if (first->first != s.label_class ||
               !lab.classes()[s.label_class].group.equal(first->second, *s.total)) {
      constant = false;
    }
  }
  json tj;
  tj["rows_labelled"] = labelled;
  tj["constant"] = constant;
  tj["value"] = first ? json(lab.classes()[first->first].group.format(first->second)) : json(nullptr);
  out["total_displacement"] = tj;

  if (!a.pgm.empty()) {
    const auto st = tracker::simulate(phi, init, a.steps);
    const int w = static_cast<int>(init.size());
    const int k = x.alphabet().size();
    std::vector<int> space;
    std::vector<int> overlay(static_cast<std::size_t>(w) * a.steps, 0);
    for (int t = 0; t < a.steps; ++t) {
      for (int z = 0; z < w; ++z) space.push_back(st.rows[t].word[z]);
    }
    for (int t = 0; t < a.steps; ++t) {
      for (int z = 0; z < w; ++z) overlay[static_cast<std::size_t>(t) * w + z] = 2 + st.rows[t].word[z];
    }
    for (const auto& tr : res.tracks) {
      for (std::size_t i = 0; i < tr.intervals.size(); ++i) {
        const int t = tr.birth + static_cast<int>(i);
        for (std::int64_t j = 0; j < tr.intervals[i].length; ++j) {
          const auto z = symbolic::floor_mod(tr.intervals[i].start + j, w);
          overlay[static_cast<std::size_t>(t) * w + z] = 0;
        }
      }
    }
    write_text(a.pgm + "_spacetime.pgm", pgm(w, a.steps, std::max(1, k - 1), space));
    write_text(a.pgm + "_defects.pgm", pgm(w, a.steps, k + 1, overlay));
  }
  return dump(out);
}

std::string cmd_verify(const VerifyArgs& a) {
  auto sub = io::load_subshift(a.subshift);
  auto rule = io::load_rule(a.ca);
  const auto& x = one_d(sub);
  const auto& phi = one_d(rule);
  if (!(phi.alphabet() == x.alphabet())) throw Error(ErrorKind::parse, "CA and subshift alphabets differ");
  const int r = a.r ? *a.r : x.radius();
  if (r < 0) throw Error(ErrorKind::parse, "--r must be nonnegative");
  const auto inv = ca::verify_weak_invariance(phi, x, r);
  const auto inj = ca::check_block_injectivity(phi, x, r);
  json inputs;
  inputs["ca"] = a.ca;
  inputs["subshift"] = a.subshift;
  json params;
  params["r"] = r;
  json out;
  out["manifest"] = manifest("verify", inputs, params);
  out["invariant"] = inv.invariant;
  out["r"] = inv.r;
  out["R"] = phi.radius();
  out["blocks_checked"] = inv.blocks_checked;
  out["distinct_images"] = inv.distinct_images;
  out["witness"] = inv.witness ? json(x.alphabet().format(*inv.witness)) : json(nullptr);
  out["witness_image"] = inv.witness_image ? json(x.alphabet().format(*inv.witness_image)) : json(nullptr);
  json ij;
  ij["injective"] = inj.injective;
  ij["blocks_checked"] = inj.blocks_checked;
  if (inj.collision) {
    ij["collision"] = json::array({x.alphabet().format(inj.collision->first), x.alphabet().format(inj.collision->second)});
  } else {
    ij["collision"] = nullptr;
  }
  out["injectivity"] = ij;
  return dump(out);
}

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse:
    case ErrorKind::invalid_argument:
      return parse_error;
    case ErrorKind::unsupported:
      return unsupported;
    case ErrorKind::inadmissible:
      return inadmissible;
    case ErrorKind::no_condensation:
      return no_condensation;
  }
  return parse_error;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Defects in cellular automata: spectra, classification and particle tracking"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Rational spectrum, phase rotation and displacement groups");
  spectrum->add_option("--subshift", sa.subshift, "Subshift JSON")->required();
  spectrum->add_option("--ca", sa.ca, "Rule JSON");

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Classify the defects of a configuration");
  classify->add_option("--subshift", ca.subshift, "Subshift JSON")->required();
  classify->add_option("--config", ca.config, "Configuration JSON")->required();
  classify->add_option("--ca", ca.ca, "Rule JSON");
  classify->add_option("--r", ca.r, "Range (0 picks the default)");
  classify->add_option("--pgm", ca.pgm, "Write the defect field as a PGM heat map");

  TrackArgs ta;
  int burn = -1;
  auto* track = app.add_subcommand("track", "Simulate on a torus and track defect particles");
  track->add_option("--ca", ta.ca, "Rule JSON")->required();
  track->add_option("--subshift", ta.subshift, "Subshift JSON")->required();
  track->add_option("--width", ta.width, "Torus width for random starts");
  track->add_option("--steps", ta.steps, "Rows to simulate, including the initial one");
  track->add_option("--seed", ta.seed, "Seed for the random start");
  track->add_option("--init", ta.init, "Cyclic configuration JSON");
  track->add_option("--burn-in", burn, "Rows skipped before events are reported");
  track->add_option("--r", ta.r, "Range for the unflawed mask (0 picks radius + 1)");
  track->add_option("--pgm", ta.pgm, "Prefix for spacetime and defect PGM renders");

  VerifyArgs va;
  int vr = -1;
  auto* verify = app.add_subcommand("verify", "Certify Phi(A_(r+R)) inside A_(r) and block injectivity");
  verify->add_option("--ca", va.ca, "Rule JSON")->required();
  verify->add_option("--subshift", va.subshift, "Subshift JSON")->required();
  verify->add_option("--r", vr, "Block radius (default: subshift radius)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : parse_error;
  }
  (void)requested_threads();
  try {
    if (*spectrum) {
      out << cmd_spectrum(sa);
    } else if (*classify) {
      out << cmd_classify(ca);
    } else if (*track) {
      if (burn >= 0) ta.burn_in = burn;
      out << cmd_track(ta);
    } else if (*verify) {
      if (vr >= 0) va.r = vr;
      out << cmd_verify(va);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return ok;
}

}  // namespace cadefect::cli
