#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fuzzdyn/fuzzdyn.hpp"

using namespace fuzzdyn;

namespace {

const char* kTriangle = R"({"kind": "finite", "points": ["a", "b", "c"],
  "distances": [["0", "1/2", "1"], ["1/2", "0", "1/2"], ["1", "1/2", "0"]],
  "map": ["b", "c", 0]})";

SystemMap finite(const AnySystem& s) { return std::get<SystemMap>(s); }

}  // namespace

TEST(Io, FiniteSystemFromJson) {
    const auto sys = finite(system_from_json(Json::parse(kTriangle)));
    EXPECT_EQ(sys.table(), (SystemMap::Table{1, 2, 0}));
    EXPECT_EQ(sys.space().distance(0, 2), Rational(1));
    EXPECT_EQ(sys.space().label(1), "b");
}

TEST(Io, MetricViolationsNameThePoints) {
    auto doc = Json::parse(kTriangle);
    doc["distances"][0][2] = "2";
    doc["distances"][2][0] = "2";
    try {
        system_from_json(doc);
        FAIL() << "expected an InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("triangle"), std::string::npos) << e.what();
    }
}

TEST(Io, MalformedSystems) {
    auto bad = [](const std::string& text) { return Json::parse(text); };
    EXPECT_THROW(system_from_json(bad(R"([1, 2])")), InputError);
    EXPECT_THROW(system_from_json(bad(R"({"points": []})")), InputError);
    EXPECT_THROW(system_from_json(bad(R"({"kind": "spiral"})")), InputError);
    EXPECT_THROW(system_from_json(bad(R"({"kind": "rotation", "n": 0, "step": 1})")), InputError);
    EXPECT_THROW(system_from_json(bad(R"({"kind": "odometer", "k": 21})")), InputError);
    auto doc = Json::parse(kTriangle);
    doc["map"] = Json::array({0, 1});
    EXPECT_THROW(system_from_json(doc), InputError);
    doc["map"] = Json::array({0, 1, "z"});
    EXPECT_THROW(system_from_json(doc), InputError);
    doc["map"] = Json::array({0, 1, 3});
    EXPECT_THROW(system_from_json(doc), InputError);
    doc = Json::parse(kTriangle);
    doc["distances"][0][1] = "x/2";
    EXPECT_THROW(system_from_json(doc), InputError);
}

TEST(Io, SpecStrings) {
    EXPECT_EQ(finite(parse_system_spec("rotation:5,2")).table(), make_rotation(5, 2).table());
    EXPECT_EQ(finite(parse_system_spec("multiply:8,2")).table(), make_multiply(8, 2).table());
    EXPECT_EQ(finite(parse_system_spec("constant:3,1")).table(), (SystemMap::Table{1, 1, 1}));
    EXPECT_EQ(finite(parse_system_spec("gridmap:tent,8,nearest")).table(),
              make_named_grid_map("tent", 8, Snap::nearest).table());
    EXPECT_EQ(finite(parse_system_spec("point")).size(), 1u);
    EXPECT_EQ(std::get<SymbolicSystem>(parse_system_spec("fullshift:2,3")).resolution(), 3u);
    EXPECT_EQ(finite(parse_system_spec(kTriangle)).table(), (SystemMap::Table{1, 2, 0}));
    for (const auto* s : {"rotation:5", "rotation:x,1", "warp:3", "gridmap:tent,8,sideways", "", "file:/nonexistent/x.json", "{"})
        EXPECT_THROW(parse_system_spec(s), InputError) << s;
}

TEST(Io, SystemsRoundTrip) {
    std::vector<SystemMap> systems = small_catalog();
    systems.push_back(finite(system_from_json(Json::parse(kTriangle))));
    systems.push_back(lift_system(make_rotation(3, 1)));
    for (const auto& sys : systems) {
        const auto back = finite(system_from_json(system_to_json(sys)));
        EXPECT_EQ(back.table(), sys.table()) << sys.provenance().summary();
        for (std::size_t i = 0; i < sys.size(); ++i)
            for (std::size_t j = 0; j < sys.size(); ++j) EXPECT_EQ(back.space().distance(i, j), sys.space().distance(i, j));
    }
    const SymbolicSystem golden({"0", "1"}, {{true, true}, {true, false}}, 3);
    const auto back = std::get<SymbolicSystem>(system_from_json(system_to_json(golden)));
    EXPECT_EQ(back.adjacency(), golden.adjacency());
    EXPECT_EQ(back.resolution(), 3u);
}

TEST(Io, FuzzySetsAndGFunctionsRoundTrip) {
    const auto s = circle_space(4);
    const FuzzySet a(s, LevelGrid(4), {4, 2, 0, 1});
    EXPECT_EQ(fuzzy_to_json(a)["grades"]["1"], "1/2");
    EXPECT_EQ(fuzzy_from_json(fuzzy_to_json(a), s), a);
    EXPECT_THROW(fuzzy_from_json(Json::parse(R"({"grid_m": 4, "grades": {"9": "1"}})"), s), InputError);
    EXPECT_THROW(fuzzy_from_json(Json::parse(R"({"grid_m": 4, "grades": {"0": "1/3"}})"), s), InputError);

    const GFunction g(LevelGrid(4), {0, 1, 1, 3, 4});
    EXPECT_EQ(gfunction_from_json(gfunction_to_json(g)).table(), g.table());
    EXPECT_EQ(parse_g_spec(R"({"grid_m": 4, "table": ["0", "1/4", "1/4", "3/4", "1"]})").table(), g.table());
    EXPECT_THROW(parse_g_spec(R"({"grid_m": 4, "table": ["0", "1/4", "1"]})"), InputError);
    EXPECT_THROW(parse_g_spec(R"({"grid_m": 2, "table": {"0": "0", "1": "1"}})"), InputError);
    EXPECT_THROW(parse_g_spec(R"({"grid_m": 2, "table": ["1/2", "1/2", "1"]})"), InputError);
}

TEST(Io, IndexSetsRoundTrip) {
    IndexSet::Bits bits(5);
    bits[0] = bits[3] = true;
    const auto exact = IndexSet::eventually_periodic(bits, 2);
    EXPECT_EQ(index_set_from_json(index_set_to_json(exact)), exact);
    const IndexSet approx(30, {1, 4, 29});
    EXPECT_EQ(index_set_from_json(index_set_to_json(approx)), approx);
    EXPECT_THROW(index_set_from_json(Json::parse(R"({"horizon": 3, "members": [-1]})")), InputError);
}

TEST(Io, CsvQuoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_row({"x", "1,2"}), "x,\"1,2\"\n");
}

TEST(Io, ReportSerialization) {
    TheoremConfig c;
    c.system = make_rotation(3, 1);
    const auto r = verify_theorem("uniform-rigidity", c);
    const auto j = report_to_json(r);
    EXPECT_EQ(j["theorem"], "uniform-rigidity");
    EXPECT_EQ(j["items"].size(), r.items.size());
    EXPECT_EQ(j["consistent"], true);
    const auto csv = report_csv(r);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<std::ptrdiff_t>(r.items.size() + 1));
}

TEST(Io, AtomicWrite) {
    const auto dir = std::filesystem::temp_directory_path() / "fuzzdyn_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    write_atomically(dir / "a.txt", "first\n");
    write_atomically(dir / "a.txt", "second\n");
    std::ifstream in(dir / "a.txt");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "second");
    EXPECT_FALSE(std::filesystem::exists(dir / "a.txt.tmp"));
    std::filesystem::remove_all(dir.parent_path());
}
