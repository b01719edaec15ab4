#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"

#include "relucx/cli.hpp"
#include "relucx/errors.hpp"
#include "relucx/experiment.hpp"
#include "relucx/io.hpp"
#include "support.hpp"

using namespace relucx;
namespace fs = std::filesystem;

namespace {

struct Scratch
{
    fs::path dir;
    explicit Scratch(const std::string& name)
        : dir(fs::temp_directory_path() / ("relucx_test_" + name + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "relucx");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string without_first_line(const std::string& s)
{
    return s.substr(s.find('\n') + 1);
}

}   // namespace

TEST_CASE("vertices JSONL round trip")
{
    const auto net = random_init({2, 5, 3, 1}, 2);
    const auto state = build_complex(net);
    std::stringstream ss;
    write_vertices_jsonl(ss, state.vertices);
    const auto back = read_vertices_jsonl(ss);
    REQUIRE(back.size() == state.vertices.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].signs == state.vertices[i].signs);
        CHECK(back[i].coords == state.vertices[i].coords);
        CHECK(back[i].zero_set == state.vertices[i].zero_set);
    }
}

TEST_CASE("complex JSONL is sorted and round trips")
{
    const auto net = test_support::hand_network();
    const auto cx = assemble(vertex_signs(build_complex(net).vertices), 2);
    std::stringstream ss;
    write_complex_jsonl(ss, cx);
    const auto cells = read_complex_jsonl(ss);
    CHECK(cells.size() == cx.size());
    CHECK(std::is_sorted(cells.begin(), cells.end()));
    CHECK(CubicalComplex::from_cells(cells, 2).cells() == cx.cells());

    std::stringstream bad("{\"signs\":\"(1,0\",\"dim\":1}\n");
    CHECK_THROWS_AS(read_complex_jsonl(bad), FormatError);
}

TEST_CASE("build command on the hand network")
{
    Scratch s("build");
    write_model(test_support::hand_network(), s.dir / "model.json");
    const auto r = run({"build", "--model", (s.dir / "model.json").string(), "--out", (s.dir / "out").string(),
                        "--svg"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(slurp(s.dir / "out" / "betti.json"))
          == nlohmann::json::parse(R"({"betti":[1,1],"bounded":0,"unbounded":1})"));
    CHECK(fs::exists(s.dir / "out" / "vertices.jsonl"));
    CHECK(fs::exists(s.dir / "out" / "complex.jsonl"));
    const auto svg = slurp(s.dir / "out" / "db.svg");
    CHECK(svg.find("<svg") == 0);
    std::size_t lines = 0;
    for (std::size_t p = svg.find("<line"); p != std::string::npos; p = svg.find("<line", p + 1))
        ++lines;
    CHECK(lines == 3);
}

TEST_CASE("build command on a constant output")
{
    Scratch s("const");
    write_model(test_support::make_network({{{1, 0}, {0, 1}}, {{0.01, 0.01}}}, {{0, 0}, {10}}),
                s.dir / "model.json");
    const auto r = run({"build", "--model", (s.dir / "model.json").string(), "--out", s.dir.string()});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(slurp(s.dir / "betti.json"))
          == nlohmann::json::parse(R"({"betti":[1,0],"bounded":0,"unbounded":0})"));
}

TEST_CASE("build command error codes")
{
    Scratch s("errors");
    {
        std::ofstream f(s.dir / "bad.json");
        f << R"({"architecture":[2,2,1],"layers":[{"weights":[[1,0],[0,"a"]],"bias":[0,0]},)"
             R"({"weights":[[1,1]],"bias":[-1]}]})";
    }
    auto r = run({"build", "--model", (s.dir / "bad.json").string(), "--out", s.dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("layers[0].weights[1][1]") != std::string::npos);

    {
        std::ofstream f(s.dir / "broken.json");
        f << "{\"architecture\": [2,2,1";
    }
    CHECK(run({"build", "--model", (s.dir / "broken.json").string(), "--out", s.dir.string()}).code == 1);
    CHECK(run({"build", "--model", (s.dir / "missing.json").string(), "--out", s.dir.string()}).code == 1);
    CHECK(run({"build", "--out", s.dir.string()}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);

    write_model(random_init({3, 2, 1}, 0), s.dir / "narrow.json");
    CHECK(run({"build", "--model", (s.dir / "narrow.json").string(), "--out", s.dir.string()}).code == 3);

    write_model(test_support::make_network({{{1, 0}, {0, 1}}, {{1, -1}}}, {{0, 0}, {0}}), s.dir / "degen.json");
    r = run({"build", "--model", (s.dir / "degen.json").string(), "--out", (s.dir / "d").string()});
    CHECK(r.code == 2);
    const auto diag = nlohmann::json::parse(slurp(s.dir / "d" / "degenerate.json"));
    CHECK(diag["error"] == "degenerate_network");
    CHECK(diag["kind"] == "near_zero_evaluation");
    CHECK(nlohmann::json::parse(r.out) == diag);
}

TEST_CASE("oracle-check command")
{
    Scratch s("oracle");
    write_model(test_support::hand_network(), s.dir / "hand.json");
    auto r = run({"oracle-check", "--model", (s.dir / "hand.json").string(), "--box", "3", "--resolution", "200"});
    CHECK(r.code == 0);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report["regions_builder"] == 7);
    CHECK(report["regions_sampled"] == 7);
    CHECK(report["counts_ok"] == true);

    REQUIRE(run({"build", "--model", (s.dir / "hand.json").string(), "--out", s.dir.string()}).code == 0);
    std::stringstream kept;
    std::ifstream in(s.dir / "complex.jsonl");
    std::string line;
    bool dropped = false;
    while (std::getline(in, line)) {
        if (!dropped && line.find("\"dim\":2") != std::string::npos) {
            dropped = true;
            continue;
        }
        kept << line << '\n';
    }
    {
        std::ofstream out(s.dir / "faulty.jsonl");
        out << kept.str();
    }
    r = run({"oracle-check", "--model", (s.dir / "hand.json").string(), "--complex",
             (s.dir / "faulty.jsonl").string()});
    CHECK(r.code == 4);

    write_model(random_init({2, 5, 5, 1}, 4), s.dir / "deep.json");
    CHECK(run({"oracle-check", "--model", (s.dir / "deep.json").string()}).code == 0);
}

TEST_CASE("experiment command writes stats")
{
    Scratch s("experiment");
    auto r = run({"experiment", "--arch", "2,5,1", "--trials", "5", "--seed", "3", "--out", s.dir.string()});
    CHECK(r.code == 0);
    const auto csv = slurp(s.dir / "stats.csv");
    CHECK(csv.rfind("# generated ", 0) == 0);
    const auto body = without_first_line(csv);
    CHECK(body.rfind("row,architecture,trial,seed,redraws,beta_0,beta_0_se,beta_1,beta_1_se,"
                     "unbounded,unbounded_se,bounded,bounded_se,note\n",
                     0)
          == 0);
    CHECK(r.out == body);
    std::size_t rows = 0;
    for (char c : body)
        rows += c == '\n';
    CHECK(rows == 1 + 1 + 5);

    CHECK(run({"experiment", "--arch", "2,x,1", "--out", s.dir.string()}).code == 1);
    CHECK(run({"experiment", "--arch", "3,2,1", "--out", s.dir.string()}).code == 3);
    CHECK(run({"experiment", "--arch", "2,5,1", "--trials", "0", "--out", s.dir.string()}).code == 1);
}

TEST_CASE("experiment output does not depend on threads")
{
    Scratch s("threads");
    const auto a = s.dir / "a", b = s.dir / "b";
    REQUIRE(run({"experiment", "--arch", "2,5,5,1", "--trials", "12", "--seed", "7", "--out", a.string(),
                 "--threads", "1"})
                .code
            == 0);
    REQUIRE(run({"experiment", "--arch", "2,5,5,1", "--trials", "12", "--seed", "7", "--out", b.string(),
                 "--threads", "4"})
                .code
            == 0);
    CHECK(without_first_line(slurp(a / "stats.csv")) == without_first_line(slurp(b / "stats.csv")));
}
