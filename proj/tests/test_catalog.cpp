#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "ocs/chiller_catalog.hpp"
#include "ocs/errors.hpp"
#include "test_util.hpp"

using namespace ocs;

namespace {

CopTable small_table() {
  // f = 1 + ev + 2 co + 4 plr on the unit cube, exactly trilinear.
  std::vector<double> values;
  for (double e : {0.0, 1.0}) {
    for (double c : {0.0, 1.0}) {
      for (double p : {0.5, 1.0}) values.push_back(1.0 + e + 2.0 * c + 4.0 * p);
    }
  }
  return CopTable({0.0, 1.0}, {0.0, 1.0}, {0.5, 1.0}, values);
}

}  // namespace

TEST_CASE("rt_to_watts uses 3516.85 W per ton") {
  CHECK(rt_to_watts(400.0) == doctest::Approx(1406740.0).epsilon(1e-12));
  CHECK(rt_to_watts(0.0) == 0.0);
  CHECK_THROWS_AS(rt_to_watts(-1.0), DomainError);
}

TEST_CASE("lookup reproduces grid nodes exactly") {
  for (const auto& spec : fixture_catalog()) {
    const auto& t = spec.cop;
    for (std::size_t e = 0; e < t.ev_axis().size(); ++e) {
      for (std::size_t c = 0; c < t.co_axis().size(); ++c) {
        for (std::size_t p = 0; p < t.plr_axis().size(); ++p) {
          CHECK(t.lookup(t.ev_axis()[e], t.co_axis()[c], t.plr_axis()[p]) == t.at(e, c, p));
        }
      }
    }
  }
}

TEST_CASE("fixture full-load COP at nominal conditions is 2.8") {
  for (const auto& spec : fixture_catalog()) {
    CHECK(cop_lookup(spec, kFixtureNominalEvK, kFixtureNominalCoK, 1.0) ==
          doctest::Approx(2.8).epsilon(1e-12));
  }
}

TEST_CASE("trilinear interpolation is exact for a trilinear function") {
  const auto t = small_table();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0), p(0.5, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double e = u(rng), c = u(rng), r = p(rng);
    CHECK(t.lookup(e, c, r) == doctest::Approx(1.0 + e + 2.0 * c + 4.0 * r).epsilon(1e-12));
  }
}

TEST_CASE("out-of-range coordinates clamp to the edge") {
  const auto t = small_table();
  CHECK(t.lookup(-5.0, 0.5, 0.75) == t.lookup(0.0, 0.5, 0.75));
  CHECK(t.lookup(0.5, 9.0, 0.75) == t.lookup(0.5, 1.0, 0.75));
  CHECK(t.lookup(0.5, 0.5, 1.4) == t.lookup(0.5, 0.5, 1.0));
  CHECK(t.lookup(0.5, 0.5, 0.1) == t.lookup(0.5, 0.5, 0.5));
  CHECK_THROWS_AS(t.lookup(0.5, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(t.lookup(0.5, 0.5, -0.2), DomainError);
}

TEST_CASE("fixture COP is monotone in both temperatures") {
  const auto spec = fixture_catalog().front();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ev(273.15, 283.15), co(293.15, 328.15), plr(0.1, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double e = ev(rng), c = co(rng), p = plr(rng);
    CHECK(cop_lookup(spec, e + 0.5, c, p) >= cop_lookup(spec, e, c, p));
    CHECK(cop_lookup(spec, e, c + 0.5, p) <= cop_lookup(spec, e, c, p));
  }
}

TEST_CASE("fixture part-load curve peaks between 0.5 and 0.7") {
  for (const auto& spec : fixture_catalog()) {
    const auto& plr = spec.cop.plr_axis();
    std::size_t best = 0;
    for (std::size_t p = 0; p < plr.size(); ++p) {
      if (cop_lookup(spec, kFixtureNominalEvK, kFixtureNominalCoK, plr[p]) >
          cop_lookup(spec, kFixtureNominalEvK, kFixtureNominalCoK, plr[best])) {
        best = p;
      }
    }
    CHECK(plr[best] >= 0.5);
    CHECK(plr[best] <= 0.7);
  }
}

TEST_CASE("fixture plant is 400/300/250 RT") {
  const auto c = fixture_catalog();
  REQUIRE(c.size() == 3);
  CHECK(c[0].nominal_capacity_w == rt_to_watts(400));
  CHECK(c[1].nominal_capacity_w == rt_to_watts(300));
  CHECK(c[2].nominal_capacity_w == rt_to_watts(250));
  for (const auto& s : c) CHECK(s.tau_h == 0.2);
}

TEST_CASE("catalog JSON round trip is bit-exact") {
  const auto original = fixture_catalog();
  const auto text = catalog_to_json(original).dump();
  const auto loaded = load_catalog_text(text);
  CHECK(loaded == original);
  CHECK(catalog_to_json(loaded).dump() == text);
}

TEST_CASE("shipped catalog file matches the built-in fixture") {
  CHECK(load_catalog_file(test::data_path("catalog/rtac_fixture.json")) == fixture_catalog());
}

TEST_CASE("capacity may be given in refrigeration tons") {
  auto doc = catalog_to_json(fixture_catalog());
  doc["chillers"][0].erase("nominal_capacity_w");
  doc["chillers"][0]["capacity_rt"] = 400;
  CHECK(load_catalog(doc)[0].nominal_capacity_w == rt_to_watts(400));
}

TEST_CASE("catalog validation names the offending field") {
  const auto base = catalog_to_json(fixture_catalog());

  auto check_field = [](const nlohmann::json& doc, const std::string& field) {
    try {
      load_catalog(doc);
      FAIL("expected a ValidationError for " << field);
    } catch (const ValidationError& e) {
      CHECK(e.field().find(field) != std::string::npos);
    }
  };

  auto doc = base;
  doc["chillers"][1]["m_min"] = 80.0;  // above m_max
  check_field(doc, "chillers[1].m_max");

  doc = base;
  doc["chillers"][0]["cop_table"]["ev_axis_k"][2] = 270.0;
  check_field(doc, "chillers[0].cop_table.ev_axis_k");

  doc = base;
  doc["chillers"][2]["cop_table"]["values"][7] = -1.0;
  check_field(doc, "chillers[2].cop_table.values[7]");

  doc = base;
  doc["chillers"][0]["cop_table"]["values"].erase(0);
  check_field(doc, "chillers[0].cop_table.values");

  doc = base;
  doc["chillers"][0]["tau_h"] = 0.0;
  check_field(doc, "chillers[0].tau_h");

  doc = base;
  doc["chillers"][0]["colour"] = "red";
  check_field(doc, "chillers[0].colour");

  CHECK_THROWS_AS(load_catalog_text("{\"chillers\": [", "broken.json"), ParseError);
}
