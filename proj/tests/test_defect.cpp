#include "cadefect/cadefect.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cadefect;
using namespace cadefect::defect;
using oracle::bits;
using oracle::data_path;

namespace {

struct Loaded {
  io::LoadedSubshift x;
  io::LoadedRule r;
  const subshift::Subshift1D& shift() const { return *x.one; }
};

Loaded load(const std::string& x, const std::string& r) {
  return {io::load_subshift(data_path("subshifts/" + x + ".json")), io::load_rule(data_path("rules/" + r + ".json"))};
}

symbolic::EpConfig config(const Loaded& l, const std::string& name) {
  return io::load_config(data_path("configs/" + name + ".json"), l.x.alphabet()).ep;
}

}  // namespace

TEST_SUITE("defect") {
  TEST_CASE("full shift field is infinite") {
    auto f = load("full", "eca18");
    const symbolic::EpConfig c{bits("011"), bits("11010"), bits("0"), 3};
    const auto fld = defect_field(c, f.shift(), -10, 20);
    for (int v : fld.values) CHECK(v == kInfinite);
    CHECK(defect_set(fld).empty());
  }

  TEST_CASE("field of s") {
    auto s = load("s18", "eca18");
    const auto c = config(s, "eca18_s");
    const auto fld = defect_field(c, s.shift(), -10, 27);
    const auto bx = oracle::BruteShift::load(data_path("subshifts/s18.json"));
    for (std::int64_t z = -10; z <= 27; ++z) CHECK(oracle::brute_field(c, bx, z, fld.at(z) + 1) == fld.at(z));
    // the two central cells of the zero run
    CHECK(defect_set(fld) == std::vector<std::int64_t>{8, 9});
    for (std::int64_t d = 1; d < 8; ++d) {
      CHECK(fld.at(8 - d) == fld.at(8) + d);
      CHECK(fld.at(9 + d) == fld.at(9) + d);
    }
  }

  TEST_CASE("golden mean with one forbidden pair") {
    auto g = load("golden", "eca18");
    const auto c = config(g, "golden_11");
    const auto fld = defect_field(c, g.shift(), -12, 13);
    // violating cells are 0 and 1; under the max-radius field F = d(z, X) for r = 1
    for (std::int64_t z = -12; z <= 13; ++z) {
      const std::int64_t d = z < 0 ? -z : (z > 1 ? z - 1 : 0);
      CHECK(fld.at(z) == d);
    }
    CHECK(defect_set(fld) == std::vector<std::int64_t>{0, 1});
  }

  TEST_CASE("field on a torus") {
    auto d = load("dstar", "eca62");
    const symbolic::CyclicConfig t{bits("110110110110110")};
    const auto f = defect_field(t, d.shift());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK_FALSE(f.bounded(f.values[i]));
    const symbolic::CyclicConfig u{bits("1101101100110110110")};
    const auto g = defect_field(u, d.shift());
    CHECK(defect_set(g).size() >= 1);
  }

  TEST_CASE("domain components") {
    auto g = load("g184", "eca184");
    const spectral::DomainLabeller lab(g.shift(), &*g.r.one);
    const symbolic::EpConfig pure{bits("01"), {}, bits("01"), 0};
    const auto one = domain_components(pure, g.shift(), 2, &lab);
    REQUIRE(one.domains.size() == 1);
    CHECK(one.domains[0].projective);
    CHECK(one.domains[0].unbounded_left);
    CHECK(one.domains[0].unbounded_right);

    const auto ap = config(g, "eca184_alpha_plus");
    const auto two = domain_components(ap, g.shift(), default_range(ap, g.shift()), &lab);
    REQUIRE(two.domains.size() == 2);
    CHECK(two.domains[0].projective);
    CHECK(two.domains[1].projective);
    CHECK(two.domains[0].component != two.domains[1].component);
  }

  TEST_CASE("ECA 62 dislocations") {
    auto d = load("dstar", "eca62");
    const spectral::DomainLabeller lab(d.shift(), &*d.r.one);
    const auto gamma = classify(config(d, "eca62_gamma"), d.shift(), lab);
    CHECK(gamma.kind == Kind::dislocation);
    CHECK(gamma.group->format(*gamma.displacement) == "1");
    CHECK(gamma.essential);
    CHECK_FALSE(gamma.removable);
    const auto beta = classify(config(d, "eca62_beta"), d.shift(), lab);
    CHECK(beta.group->format(*beta.displacement) == "2");
    const auto alpha = classify(config(d, "eca62_alpha"), d.shift(), lab);
    CHECK(alpha.group->format(*alpha.displacement) == "0");
    CHECK_FALSE(alpha.essential);
    CHECK(alpha.removable);
  }

  TEST_CASE("ECA 184 interfaces") {
    auto g = load("g184", "eca184");
    const spectral::DomainLabeller lab(g.shift(), &*g.r.one);
    const auto beta = classify(config(g, "eca184_beta"), g.shift(), lab);
    CHECK(beta.kind == Kind::interface);
    CHECK(beta.signature == std::vector<std::string>{"G0", "G1"});
    CHECK(beta.essential);
    for (const std::string n : {"alpha_plus", "omega_plus", "alpha_minus", "omega_minus", "epsilon"}) {
      CAPTURE(n);
      CHECK(classify(config(g, "eca184_" + n), g.shift(), lab).kind == Kind::interface);
    }
    for (const std::string n : {"gamma_plus", "gamma_minus"}) {
      const auto r = classify(config(g, "eca184_" + n), g.shift(), lab);
      CHECK(r.kind == Kind::dislocation);
      CHECK(r.group->format(*r.displacement) == "1");
    }
  }

  TEST_CASE("marker dislocation of s") {
    auto s = load("s18", "eca18");
    const spectral::DomainLabeller lab(s.shift(), &*s.r.one);
    const auto r = classify(config(s, "eca18_s"), s.shift(), lab);
    CHECK(r.kind == Kind::marker_dislocation);
    CHECK(r.group->name() == "Z/2");
    CHECK(r.group->format(*r.displacement) == "1");
    CHECK(r.defect_set == std::vector<std::int64_t>{8, 9});
    CHECK(r.essential);
  }

  TEST_CASE("golden mean defect is a removable dislocation") {
    auto g = load("golden", "eca18");
    const spectral::DomainLabeller lab(g.shift(), nullptr);
    const auto r = classify(config(g, "golden_11"), g.shift(), lab);
    CHECK(r.defect_set == std::vector<std::int64_t>{0, 1});
    CHECK(r.removable);
    CHECK_FALSE(r.essential);
  }

  TEST_CASE("phase gap") {
    auto d = load("dstar", "eca62");
    const auto& x = d.shift();
    const int v = x.components()[0].states[0];
    const int w = x.graph().succ[v][0];
    CHECK(phase_gap(x, v, w, 0) == 0);
    CHECK(phase_gap(x, v, w, 1) == 1);
    CHECK(phase_gap(x, v, w, 2) == 2);
    CHECK(phase_gap(x, v, w, 3) == 0);
  }

  TEST_CASE("removability") {
    auto d = load("dstar", "eca62");
    CHECK(is_removable(config(d, "eca62_alpha"), d.shift()));
    CHECK_FALSE(is_removable(config(d, "eca62_beta"), d.shift()));
    CHECK_FALSE(is_removable(config(d, "eca62_gamma"), d.shift()));
    auto f = load("full", "eca18");
    CHECK(is_removable(symbolic::EpConfig{bits("0"), bits("1011"), bits("1"), 0}, f.shift()));
    CHECK_THROWS_AS(is_removable(symbolic::EpConfig{bits("1"), {}, bits("110"), 0}, d.shift()), Error);
  }

  TEST_CASE("checkerboard wall") {
    const auto x = io::load_subshift(data_path("subshifts/checkerboard.json"));
    const auto g = io::load_config(data_path("configs/checkerboard_wall.json"), x.alphabet()).grid;
    const auto rep = classify2d(g, *x.two, 0, x.box);
    REQUIRE(rep.domains.size() == 2);
    CHECK(rep.kind == Kind::dislocation);
    REQUIRE(rep.group);
    CHECK(rep.group->kind() == spectral::DisplacementGroup::Kind::planar);
    CHECK(rep.group->format(rep.matrix[0][1]) == "(1,0)");
    // the northern domain holds the top rows
    for (const auto& [cx, cy] : rep.domains[0].cells) CHECK(cy >= g.height / 2);
    symbolic::Grid2D tile(2, 2);
    tile.set(1, 0, 1);
    tile.set(0, 1, 1);
    const auto p = periodicity_group(tile);
    CHECK(p.order() == 2);
    CHECK(p.equal({1, 1}, {0, 0}));
    CHECK(p.equal({1, -1}, {0, 0}));
  }
}
