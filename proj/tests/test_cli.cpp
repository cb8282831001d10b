#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lqdepth/cli.hpp"

using namespace lqdepth;

namespace {

// Scratch files land in the system temp directory, not the invocation cwd.
const bool kScratchCwd = [] {
    std::filesystem::current_path(std::filesystem::temp_directory_path());
    return true;
}();

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

void write_tmp(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Minimal XML well-formedness check: declaration, balanced tags, quoting.
bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '<') {
            ++i;
            continue;
        }
        const std::size_t close = text.find('>', i);
        if (close == std::string::npos) return false;
        std::string tag = text.substr(i + 1, close - i - 1);
        i = close + 1;
        if (tag.empty()) return false;
        if (tag.front() == '?') continue;  // declaration
        bool closing = tag.front() == '/';
        bool self_closing = tag.back() == '/';
        if (closing) {
            const std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
            continue;
        }
        const std::size_t name_end = tag.find_first_of(" \t/");
        const std::string name =
            tag.substr(0, name_end == std::string::npos ? tag.size() : name_end);
        if (!self_closing) stack.push_back(name);
    }
    return stack.empty();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

}  // namespace

TEST_CASE("scenario command is byte-deterministic") {
    REQUIRE(run_cli({"scenario", "--scenario", "s1", "--n", "5", "--seed", "7", "--out",
                     "tmp_s1_a.csv"}) == 0);
    REQUIRE(run_cli({"scenario", "--scenario", "s1", "--n", "5", "--seed", "7", "--out",
                     "tmp_s1_b.csv"}) == 0);
    const std::string a = read_file("tmp_s1_a.csv");
    CHECK(a == read_file("tmp_s1_b.csv"));
    CHECK(count_occurrences(a, "\n") == 5);
}

TEST_CASE("scenario s3 produces n rows of two columns in [-1,1]-free space") {
    REQUIRE(run_cli({"scenario", "--scenario", "s3", "--n", "1000", "--seed", "3", "--out",
                     "tmp_s3.csv"}) == 0);
    const std::string body = read_file("tmp_s3.csv");
    CHECK(count_occurrences(body, "\n") == 1000);
    // every row has exactly one comma
    CHECK(count_occurrences(body, ",") == 1000);
}

TEST_CASE("scenario output feeds the depth command") {
    REQUIRE(run_cli({"scenario", "--scenario", "s2", "--n", "50", "--seed", "21", "--out",
                     "tmp_s2.csv"}) == 0);
    write_tmp("tmp_queries.csv", "0,0\n2,1\n");
    std::string out;
    const int code = run_cli({"depth", "--data", "tmp_s2.csv", "--q", "2", "--points",
                              "tmp_queries.csv"},
                             &out);
    CHECK(code == 0);
    CHECK(count_occurrences(out, "\n") == 3);  // header + 2 rows
}

TEST_CASE("depth at the sample mean prints 1") {
    write_tmp("tmp_data1.csv", "0\n1\n2\n");
    write_tmp("tmp_q_mean.csv", "1\n");
    std::string out;
    REQUIRE(run_cli({"depth", "--data", "tmp_data1.csv", "--q", "2", "--points",
                     "tmp_q_mean.csv"},
                    &out) == 0);
    CHECK(out.find("\n1,1,0\n") != std::string::npos);  // x=1, depth=1, s=0
}

TEST_CASE("q = 2 equals mahalanobis mode") {
    REQUIRE(run_cli({"scenario", "--scenario", "s2", "--n", "40", "--seed", "5", "--out",
                     "tmp_md.csv"}) == 0);
    write_tmp("tmp_md_q.csv", "0.5,0.5\n-1,2\n3,0\n");
    std::string a, b;
    REQUIRE(run_cli({"depth", "--data", "tmp_md.csv", "--q", "2", "--points",
                     "tmp_md_q.csv"},
                    &a) == 0);
    REQUIRE(run_cli({"depth", "--data", "tmp_md.csv", "--q-mode", "mahalanobis",
                     "--points", "tmp_md_q.csv"},
                    &b) == 0);
    CHECK(a == b);  // identical down to the last digit by Proposition-1 dispatch
}

TEST_CASE("q = inf on the two-point cloud at x = 2 prints 0.25") {
    write_tmp("tmp_data2.csv", "0\n1\n");
    write_tmp("tmp_q2.csv", "2\n");
    std::string out;
    REQUIRE(run_cli({"depth", "--data", "tmp_data2.csv", "--q", "inf", "--points",
                     "tmp_q2.csv"},
                    &out) == 0);
    CHECK(out.find("2,0.25,3\n") != std::string::npos);
}

TEST_CASE("zonoid mode reports empty discrepancy outside the hull") {
    write_tmp("tmp_data3.csv", "0\n1\n");
    write_tmp("tmp_q3.csv", "2\n0.5\n");
    std::string out;
    REQUIRE(run_cli({"depth", "--data", "tmp_data3.csv", "--q-mode", "zonoid", "--points",
                     "tmp_q3.csv"},
                    &out) == 0);
    CHECK(out.find("2,0,\n") != std::string::npos);   // outside: depth 0, s empty
    CHECK(out.find("0.5,1,0\n") != std::string::npos);  // the mean: depth 1
}

TEST_CASE("hull command prints membership flags") {
    write_tmp("tmp_data4.csv", "0,0\n1,0\n0,1\n1,1\n");
    write_tmp("tmp_q4.csv", "0.5,0.5\n2,2\n");
    std::string out;
    REQUIRE(run_cli({"hull", "--data", "tmp_data4.csv", "--points", "tmp_q4.csv"}, &out) ==
            0);
    CHECK(out.find("0.5,0.5,1\n") != std::string::npos);
    CHECK(out.find("2,2,0\n") != std::string::npos);
}

TEST_CASE("contour command emits a well-formed svg with one path per level") {
    const int code = run_cli({"contour", "--scenario", "s2", "--n", "60", "--seed", "42",
                              "--q", "2", "--rays", "16", "--levels", "0.3,0.6,1.0",
                              "--out", "tmp_contour.svg", "--vertices-out",
                              "tmp_contour_vertices.csv"});
    REQUIRE(code == 0);
    const std::string svg = read_file("tmp_contour.svg");
    CHECK(xml_well_formed(svg));
    CHECK(count_occurrences(svg, "<path ") == 3);
    CHECK(count_occurrences(svg, "<polygon ") == 1);             // hull
    CHECK(count_occurrences(svg, "<circle ") == 60 + 1);         // points + mean
    CHECK(count_occurrences(svg, "stroke-dasharray") == 1);

    const std::string verts = read_file("tmp_contour_vertices.csv");
    // 16 vertices for the two proper levels, 1 for the degenerate level 1.0.
    CHECK(count_occurrences(verts, "\n") == 1 + 16 + 16 + 1);

    // Determinism: rerunning produces byte-identical output.
    REQUIRE(run_cli({"contour", "--scenario", "s2", "--n", "60", "--seed", "42", "--q",
                     "2", "--rays", "16", "--levels", "0.3,0.6,1.0", "--out",
                     "tmp_contour_b.svg"}) == 0);
    CHECK(read_file("tmp_contour_b.svg") == svg);
}

TEST_CASE("contour without hull and mean markers") {
    REQUIRE(run_cli({"contour", "--scenario", "s1", "--n", "40", "--seed", "2", "--q", "1",
                     "--rays", "8", "--levels", "0.5", "--no-hull", "--no-mean", "--out",
                     "tmp_plain.svg"}) == 0);
    const std::string svg = read_file("tmp_plain.svg");
    CHECK(count_occurrences(svg, "<polygon ") == 0);
    CHECK(count_occurrences(svg, "<circle ") == 40);
    CHECK(count_occurrences(svg, "<path ") == 1);
}

TEST_CASE("default levels") {
    const std::vector<double> lv = cli::default_levels(0.25);
    REQUIRE(lv.size() == 10);
    CHECK(lv[0] == doctest::Approx(0.25));
    CHECK(lv[1] == doctest::Approx(1.0 / 3.0));
    CHECK(lv[9] == 1.0);
    const std::vector<double> lv2 = cli::default_levels(0.2);
    CHECK(lv2[1] == doctest::Approx(0.2889).epsilon(1e-3));
}

TEST_CASE("argument errors exit with code 2") {
    std::string err;
    CHECK(run_cli({"depth", "--points", "nope.csv"}, nullptr, &err) == 2);  // missing --data
    CHECK(run_cli({"depth", "--data", "no_such_file.csv", "--points", "also_missing.csv"},
                  nullptr, &err) == 2);
    CHECK(run_cli({"bogus"}, nullptr, &err) == 2);
    CHECK(run_cli({"contour", "--scenario", "s1", "--q", "2", "--levels", "0.5,0.4",
                   "--out", "tmp_x.svg"},
                  nullptr, &err) == 2);  // non-increasing levels
    CHECK(run_cli({"contour", "--scenario", "s1", "--log", "--q", "1", "--out",
                   "tmp_y.svg"},
                  nullptr, &err) == 2);  // --log without --data
    CHECK(run_cli({"depth", "--data", "tmp_data1.csv", "--q", "0.3", "--points",
                   "tmp_q_mean.csv"},
                  nullptr, &err) == 2);  // invalid order
}

TEST_CASE("help exits cleanly") {
    std::string out;
    CHECK(run_cli({"--help"}, &out) == 0);
    CHECK(out.find("depth") != std::string::npos);
}
