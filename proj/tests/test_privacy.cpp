#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "rangesynth/privacy.hpp"

using namespace rangesynth;

namespace {

Table people(int n, std::uint64_t seed) {
  Table t;
  t.columns.push_back({.name = "age", .kind = ColumnKind::Integer});
  t.columns.push_back({.name = "zip", .kind = ColumnKind::Integer});
  t.columns.push_back({.name = "group", .kind = ColumnKind::Text});
  const char* groups[] = {"a", "b", "c", "d"};
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    t.rows.push_back({Value{static_cast<std::int64_t>(18 + rng.below(60))},
                      Value{static_cast<std::int64_t>(10000 + rng.below(900))},
                      Value{std::string(groups[rng.below(4)])}});
  return t;
}

}  // namespace

TEST_CASE("precision improvement") {
  CHECK(precision_improvement(0.7, 0.4) == Catch::Approx(0.5));
  CHECK(precision_improvement(0.4, 0.4) == 0.0);
  CHECK(precision_improvement(0.2, 0.4) < 0.0);
  CHECK(precision_improvement(1.0, 0.0) == 1.0);
  CHECK_THROWS(precision_improvement(0.5, 1.0));
}

TEST_CASE("wilson half width") {
  CHECK(wilson_half_width(0.5, 0) == 1.0);
  CHECK(wilson_half_width(0.5, 100) == Catch::Approx(0.0962).margin(0.001));
  // shrinks with n, widest at p = 0.5
  CHECK(wilson_half_width(0.5, 400) < wilson_half_width(0.5, 100));
  CHECK(wilson_half_width(0.1, 100) < wilson_half_width(0.5, 100));
}

TEST_CASE("split_test_control partitions the rows") {
  Table t = people(101, 1);
  Rng rng(2);
  auto [test, control] = split_test_control(t, 0.5, rng);
  CHECK(control.rows.size() == 51);  // floor(101 * 0.5 + 0.5)
  CHECK(test.rows.size() == 50);
  // every original row lands on exactly one side
  std::multiset<std::string> orig, both;
  auto key = [](const std::vector<Value>& row) {
    std::string k;
    for (const auto& v : row) k += value_to_string(v) + "|";
    return k;
  };
  for (const auto& r : t.rows) orig.insert(key(r));
  for (const auto& r : test.rows) both.insert(key(r));
  for (const auto& r : control.rows) both.insert(key(r));
  CHECK(orig == both);

  CHECK_THROWS(split_test_control(t, 0.0, rng));
  CHECK_THROWS(split_test_control(t, 1.0, rng));
  Table tiny = people(1, 3);
  CHECK_THROWS(split_test_control(tiny, 0.5, rng));
}

TEST_CASE("gower distance") {
  Table t = people(2, 4);
  t.rows[0] = {Value{std::int64_t{20}}, Value{std::int64_t{10000}}, Value{std::string("a")}};
  t.rows[1] = {Value{std::int64_t{30}}, Value{std::int64_t{10100}}, Value{std::string("b")}};
  detail::GowerContext ctx;
  ctx.ranges = {100.0, 1000.0, 0.0};
  std::vector<int> all{0, 1, 2};
  // (|20-30|/100 + |10000-10100|/1000 + 1) / 3
  double d = detail::gower_distance(t.rows[0], t.rows[1], all, t, ctx);
  CHECK(d == Catch::Approx((0.1 + 0.1 + 1.0) / 3.0));
  CHECK(detail::gower_distance(t.rows[0], t.rows[0], all, t, ctx) == 0.0);

  // numeric difference capped at 1
  std::vector<Value> far = {Value{std::int64_t{100000}}, Value{std::int64_t{10000}},
                            Value{std::string("a")}};
  CHECK(detail::gower_distance(t.rows[0], far, {0}, t, ctx) == 1.0);

  // nulls match only nulls
  std::vector<Value> na = {Value{std::monostate{}}, Value{std::int64_t{1}}, Value{std::string("a")}};
  std::vector<Value> nb = {Value{std::monostate{}}, Value{std::int64_t{1}}, Value{std::string("a")}};
  CHECK(detail::gower_distance(na, nb, {0}, t, ctx) == 0.0);
  CHECK(detail::gower_distance(na, t.rows[0], {0}, t, ctx) == 1.0);
}

TEST_CASE("infer_secret picks the nearest record's secret, ties to the first") {
  Table syn = people(0, 5);
  syn.rows.push_back({Value{std::int64_t{20}}, Value{std::int64_t{10000}}, Value{std::string("a")}});
  syn.rows.push_back({Value{std::int64_t{21}}, Value{std::int64_t{10000}}, Value{std::string("b")}});
  syn.rows.push_back({Value{std::int64_t{60}}, Value{std::int64_t{10900}}, Value{std::string("c")}});
  detail::GowerContext ctx;
  ctx.ranges = {100.0, 1000.0, 0.0};
  std::vector<Value> victim = {Value{std::int64_t{20}}, Value{std::int64_t{10001}}, Value{}};
  CHECK(infer_secret(syn, victim, {0, 1}, 2, ctx) == Value{std::string("a")});

  // exact tie between rows 0 and 1: lowest index wins
  syn.rows[1][0] = Value{std::int64_t{20}};
  syn.rows[1][1] = Value{std::int64_t{10001}};
  syn.rows[0][1] = Value{std::int64_t{10001}};
  CHECK(infer_secret(syn, victim, {0, 1}, 2, ctx) == Value{std::string("a")});

  CHECK_THROWS(infer_secret(Table{}, victim, {0, 1}, 2, ctx));
  CHECK_THROWS(infer_secret(syn, victim, {}, 2, ctx));
}

TEST_CASE("run_suite flags a leaky synthesizer") {
  Table t = people(400, 6);
  AttackConfig cfg;
  cfg.n_attacks = 300;
  // worst case: the "synthetic" data is the test half verbatim
  AttackReport report = run_suite(t, [](const Table& test) { return test; }, cfg, 99);
  CHECK(report.total_attacks == 300);
  bool leaky = false;
  for (const auto& r : report.columns) {
    CHECK(r.p_test > r.p_control);
    if (r.retained && r.precision_improvement > 0.5) leaky = true;
  }
  CHECK(leaky);
}

TEST_CASE("run_suite passes an independent synthesizer") {
  Table t = people(400, 7);
  AttackConfig cfg;
  cfg.n_attacks = 300;
  // rows drawn independently of the input reveal nothing about any victim
  auto independent = [](const Table& test) {
    Table out;
    out.columns = test.columns;
    Table fresh = people(static_cast<int>(test.rows.size()), 12345);
    out.rows = fresh.rows;
    return out;
  };
  AttackReport report = run_suite(t, independent, cfg, 100);
  for (const auto& r : report.columns) {
    if (r.retained) CHECK(r.precision_improvement < 0.5);
  }
}

TEST_CASE("run_suite input validation") {
  Table t = people(10, 8);
  AttackConfig cfg;
  cfg.n_attacks = 0;
  CHECK_THROWS_AS(run_suite(t, [](const Table& x) { return x; }, cfg, 1), SchemaError);

  Table one;
  one.columns.push_back({.name = "v", .kind = ColumnKind::Integer});
  one.rows.push_back({Value{std::int64_t{1}}});
  AttackConfig ok;
  CHECK_THROWS_AS(run_suite(one, [](const Table& x) { return x; }, ok, 1), SchemaError);
}
