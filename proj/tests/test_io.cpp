#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flagalg/battery.hpp"
#include "flagalg/io.hpp"

using namespace flagalg;

TEST(TableJson, RoundTrip) {
  auto ctx = AlgebraContext<Rationals>::make(fixtures::v_poset(), 3, Rationals{});
  auto a = scramble(ctx, 2);
  const Json j = table_to_json(a.table());
  EXPECT_EQ(j["dim"], 7);
  EXPECT_EQ(j["ring"], "Q");
  EXPECT_TRUE(table_from_json(j, Rationals{}) == a.table());
  EXPECT_TRUE(table_from_json(Json::parse(j.dump()), Rationals{}) == a.table());
}

TEST(TableJson, Format) {
  auto ctx = AlgebraContext<PrimeField>::make(Poset::chain(2), 3, PrimeField(5));
  const Json j = table_to_json(ctx->structure_constants());
  // e_001 e_011 = e_001 + e_011
  bool found = false;
  for (const auto& e : j["table"]) {
    if (e[0] == 1 && e[1] == 2) {
      EXPECT_EQ(e[2], Json::parse(R"([[1, "1 mod 5"], [2, "1 mod 5"]])"));
      found = true;
    }
    EXPECT_FALSE(e[2].empty());
  }
  EXPECT_TRUE(found);
}

TEST(TableJson, Errors) {
  EXPECT_THROW(table_from_json(Json::parse(R"({"dim": 2})"), Rationals{}), ParseError);
  EXPECT_THROW(table_from_json(Json::parse(R"({"dim": 2, "table": [[0, 2, [[0, "1"]]]]})"), Rationals{}), ParseError);
  EXPECT_THROW(table_from_json(Json::parse(R"({"dim": 2, "table": [[0, 0, [[0, "x"]]]]})"), Rationals{}), ParseError);
  EXPECT_THROW(table_from_json(Json::parse(R"({"dim": 2, "table": [[0, 0, [[0, "1"]]], [0, 0, [[1, "1"]]]]})"), Rationals{}),
               ParseError);
  auto t = table_from_json(Json::parse(R"({"dim": 2, "table": [[0, 0, [[1, "−3/6"]]]]})"), Rationals{});
  EXPECT_EQ(t.product_vector(0, 0), (Vec<Rationals>{0, mpq_class(-1, 2)}));
}

TEST(ElementJson, RoundTripByName) {
  auto ctx = AlgebraContext<Rationals>::make(fixtures::v_poset(), 3, Rationals{});
  auto f = element_from_json(ctx, Json::parse(R"([[["a","a","b"], "3/4"], [["a","c","c"], -2]])"));
  EXPECT_EQ(f.terms().size(), 2u);
  EXPECT_EQ(element_to_json(f), Json::parse(R"([[["a","a","b"], "3/4"], [["a","c","c"], "-2"]])"));
  EXPECT_THROW(element_from_json(ctx, Json::parse(R"([[["b","a","a"], "1"]])")), ParseError);
  EXPECT_THROW(element_from_json(ctx, Json::parse(R"([[["a","z","z"], "1"]])")), ParseError);
}

TEST(Battery, ListsEveryTheoremOncePerPoset) {
  auto p = Poset::chain(2);
  for (const AnyRing& ring : {AnyRing{Rationals{}}, AnyRing{Integers{}}, AnyRing{IntegersMod(6)}}) {
    auto reports = run_battery_all({p}, ring, BatteryOptions{1, false}, 1);
    ASSERT_EQ(reports.size(), 1u);
    ASSERT_EQ(reports[0].results.size(), theorem_ids().size());
    for (std::size_t i = 0; i < theorem_ids().size(); ++i) EXPECT_EQ(reports[0].results[i].id, theorem_ids()[i]);
    for (const auto& r : reports[0].results) EXPECT_NE(r.status, Status::fail) << r.id << " " << r.detail.dump();
  }
}

TEST(Battery, DecomposableRingKeepsArithmeticSuite) {
  auto reports = run_battery_all({Poset::chain(2)}, IntegersMod(6), BatteryOptions{}, 1);
  std::map<std::string, Status> by_id;
  for (const auto& r : reports[0].results) by_id[r.id] = r.status;
  EXPECT_EQ(by_id["flag.closed_form_product"], Status::pass);
  EXPECT_EQ(by_id["flag.power_associativity"], Status::pass);
  EXPECT_EQ(by_id["lattice.commutator_is_J1"], Status::unsupported);
  EXPECT_EQ(exit_code(reports), 2);
}

TEST(Battery, ParallelRunsMatchSerialOrder) {
  std::vector<Poset> posets;
  for (std::size_t m = 1; m <= 3; ++m)
    for (auto& p : enumerate_posets(m)) posets.push_back(p);
  const BatteryOptions opt{3, false};
  auto serial = report_to_json(run_battery_all(posets, Rationals{}, opt, 1), Rationals{}, opt);
  auto parallel = report_to_json(run_battery_all(posets, Rationals{}, opt, 3), Rationals{}, opt);
  EXPECT_EQ(serial.dump(), parallel.dump());
  EXPECT_EQ(serial["posets"].size(), 8u);
  EXPECT_EQ(serial["summary"]["fail"], 0);
}
