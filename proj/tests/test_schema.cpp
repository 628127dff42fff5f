#include <catch2/catch_amalgamated.hpp>

#include "rangesynth/common.hpp"
#include "rangesynth/schema.hpp"
#include "rangesynth/snapping.hpp"

using namespace rangesynth;

namespace {

std::vector<std::vector<std::string>> column(std::vector<std::string> cells) {
  std::vector<std::vector<std::string>> rows;
  for (auto& c : cells) rows.push_back({std::move(c)});
  return rows;
}

}  // namespace

TEST_CASE("infer_column_kinds picks the narrowest kind") {
  CHECK(infer_column_kinds({"c"}, column({"1", "2", "3"}))[0].kind == ColumnKind::Integer);
  CHECK(infer_column_kinds({"c"}, column({"1.5", "2", "x"}))[0].kind == ColumnKind::Text);
  CHECK(infer_column_kinds({"c"}, column({"1.5", "2"}))[0].kind == ColumnKind::Real);
  CHECK(infer_column_kinds({"c"}, column({"true", "false", ""}))[0].kind == ColumnKind::Boolean);
  CHECK(infer_column_kinds({"c"}, column({"2020-05-01", "1999-12-31 23:59:59"}))[0].kind ==
        ColumnKind::Datetime);
  CHECK_THROWS_AS(infer_column_kinds({}, {}), SchemaError);
}

TEST_CASE("empty cells parse as null, distinct from empty text") {
  auto metas = infer_column_kinds({"c"}, column({"true", "false", ""}));
  CHECK(is_null(parse_cell("", metas[0])));
  CHECK(parse_cell("true", metas[0]) == Value{true});
}

TEST_CASE("cast_to_real") {
  ColumnMeta b{.name = "b", .kind = ColumnKind::Boolean};
  CHECK(cast_to_real(Value{true}, b, 99.0) == 1.0);
  CHECK(cast_to_real(Value{false}, b, 99.0) == 0.0);

  ColumnMeta age{.name = "age", .kind = ColumnKind::Integer};
  CHECK(cast_to_real(Value{std::monostate{}}, age, 128.0) == 128.0);
  CHECK(cast_to_real(Value{std::int64_t{42}}, age, 128.0) == 42.0);

  ColumnMeta txt{.name = "t", .kind = ColumnKind::Text};
  txt.casting_table = {"broad", "brock", "broil"};
  CHECK(cast_to_real(Value{std::string("brock")}, txt, 99.0) == 1.0);
  CHECK_THROWS_AS(cast_to_real(Value{std::string("missing")}, txt, 99.0), SchemaError);
}

TEST_CASE("datetime casting uses seconds since 1800-01-01") {
  auto dt = parse_datetime("1800-01-02T00:00:00Z");
  REQUIRE(dt);
  CHECK(dt->secs == 86400);
  CHECK(format_datetime(*dt) == "1800-01-02T00:00:00Z");
  CHECK(parse_datetime("1800-01-01")->secs == 0);

  ColumnMeta m{.name = "d", .kind = ColumnKind::Datetime};
  Rng rng(1);
  Value back = cast_back(86400.0, m, singularity(86400.0), -1.0, rng);
  CHECK(std::get<DateTime>(back).secs == 86400);
}

TEST_CASE("cast_back") {
  Rng rng(3);
  ColumnMeta b{.name = "b", .kind = ColumnKind::Boolean};
  CHECK(cast_back(1.0, b, singularity(1.0), 2.0, rng) == Value{true});
  CHECK(cast_back(0.2, b, SnappedRange{0, 1}, 2.0, rng) == Value{false});

  ColumnMeta i{.name = "i", .kind = ColumnKind::Integer};
  CHECK(cast_back(3.6, i, SnappedRange{0, 8}, 99.0, rng) == Value{std::int64_t{4}});
  CHECK(cast_back(3.5, i, SnappedRange{0, 8}, 99.0, rng) == Value{std::int64_t{4}});  // half-up
  CHECK(cast_back(7.9, i, SnappedRange{0, 8}, 99.0, rng) == Value{std::int64_t{7}});  // clamped
  CHECK(cast_back(8.0, i, singularity(8.0), 8.0, rng) == Value{std::monostate{}});    // null code
  CHECK_THROWS(cast_back(50.0, i, SnappedRange{0, 8}, 99.0, rng));
}

TEST_CASE("text cast_back generalizes intervals and keeps singularities exact") {
  ColumnMeta m{.name = "t", .kind = ColumnKind::Text};
  m.casting_table = {"broad", "brock", "broil"};
  Rng rng(9);
  CHECK(cast_back(1.0, m, singularity(1.0), 99.0, rng) == Value{std::string("brock")});

  Value v = cast_back(1.3, m, SnappedRange{0, 4}, 99.0, rng);
  const std::string& s = std::get<std::string>(v);
  CHECK(s.substr(0, 4) == "bro*");
  CHECK(s.size() == 7);
}

TEST_CASE("text_generalize") {
  Rng rng(5);
  CHECK(text_generalize({"broad", "brock", "broil"}, rng).substr(0, 4) == "bro*");
  CHECK(text_generalize({"aa", "ab"}, rng).substr(0, 2) == "a*");
  CHECK(text_generalize({"x", "y"}, rng).substr(0, 1) == "*");
  // fresh suffix per row
  std::string a = text_generalize({"x", "y"}, rng);
  std::string b = text_generalize({"x", "y"}, rng);
  CHECK(a.size() == 4);
}

TEST_CASE("round trip through a singularity recovers the value") {
  Rng rng(11);
  ColumnMeta i{.name = "i", .kind = ColumnKind::Integer};
  for (std::int64_t v : {-5, 0, 7, 1000}) {
    double x = cast_to_real(Value{v}, i, 1e9);
    CHECK(cast_back(x, i, singularity(x), 1e9, rng) == Value{v});
  }
  ColumnMeta t{.name = "t", .kind = ColumnKind::Text};
  t.casting_table = {"a", "b", "c"};
  for (const char* s : {"a", "b", "c"}) {
    double x = cast_to_real(Value{std::string(s)}, t, 99.0);
    CHECK(cast_back(x, t, singularity(x), 99.0, rng) == Value{std::string(s)});
  }
}

TEST_CASE("text casting is order-isomorphic") {
  ColumnMeta t{.name = "t", .kind = ColumnKind::Text};
  std::vector<Value> col;
  for (const char* s : {"pear", "apple", "fig", "banana", "applet"}) col.push_back(std::string(s));
  build_casting_table(t, col);
  for (const auto& u : t.casting_table)
    for (const auto& w : t.casting_table) {
      double cu = cast_to_real(Value{u}, t, 99.0);
      double cw = cast_to_real(Value{w}, t, 99.0);
      CHECK((u < w) == (cu < cw));
    }
}

TEST_CASE("casting table is consecutive from zero in sorted order") {
  ColumnMeta t{.name = "t", .kind = ColumnKind::Text};
  std::vector<Value> col{std::string("b"), std::string("a"), std::string("b"), std::monostate{}};
  build_casting_table(t, col);
  REQUIRE(t.casting_table == std::vector<std::string>{"a", "b"});
  CHECK(t.casting_index("a") == 0);
  CHECK(t.casting_index("b") == 1);
}
