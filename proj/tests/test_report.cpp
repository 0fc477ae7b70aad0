#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <critline/audit.hpp>
#include <critline/report.hpp>

using critline::ReportFormat;
using critline::ReportTable;
using critline::cplx;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string temp_path(const std::string& leaf) {
    const char* base = std::getenv("TMPDIR");
    return std::string(base ? base : "/tmp") + "/" + leaf;
}

ReportTable mixed_table() {
    ReportTable t;
    t.columns = {"name", "x", "n", "ok"};
    t.add_row({std::string("plain"), 0.1, 7ll, true});
    t.add_row({std::string("has,comma"), 1.0 / 3.0, -2ll, false});
    t.add_row({std::string("has\"quote"), 1e300, 0ll, true});
    t.add_row({std::string("two\nlines"), -2.5e-308, 9007199254740993ll, false});
    return t;
}

} // namespace

TEST_CASE("CSV rendering follows the quoting and precision rules") {
    std::string csv = critline::render_csv(mixed_table());
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < csv.size()) {
        std::size_t nl = csv.find('\n', start);
        REQUIRE(nl != std::string::npos);
        lines.push_back(csv.substr(start, nl - start));
        start = nl + 1;
    }
    // the embedded line break keeps row 4 on two physical lines
    REQUIRE(lines.size() == 6);
    REQUIRE(csv.back() == '\n');
    REQUIRE(csv.find('\r') == std::string::npos);

    CHECK(lines[0] == "name,x,n,ok");
    CHECK(lines[1] == "plain,0.10000000000000001,7,true");
    CHECK(lines[2] == "\"has,comma\",0.33333333333333331,-2,false");
    CHECK(lines[3] == "\"has\"\"quote\",1.0000000000000001e+300,0,true");
    CHECK(lines[4] == "\"two");
    CHECK(lines[5] == "lines\",-2.4999999999999998e-308,9007199254740993,false");

    for (double v : {0.1, 1.0 / 3.0, 1e300, -2.5e-308, 14.134725142270323}) {
        std::string text = critline::detail::fmt_double(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
}

TEST_CASE("JSON lines rendering keeps native types and column order") {
    std::string out = critline::render_json_lines(mixed_table());
    std::vector<nlohmann::ordered_json> rows;
    std::size_t start = 0;
    while (start < out.size()) {
        std::size_t nl = out.find('\n', start);
        REQUIRE(nl != std::string::npos);
        rows.push_back(nlohmann::ordered_json::parse(out.substr(start, nl - start)));
        start = nl + 1;
    }
    REQUIRE(rows.size() == 4);
    for (const auto& obj : rows) {
        REQUIRE(obj.size() == 4);
        std::vector<std::string> keys;
        for (auto it = obj.begin(); it != obj.end(); ++it) keys.push_back(it.key());
        CHECK(keys == std::vector<std::string>{"name", "x", "n", "ok"});
        CHECK(obj["name"].is_string());
        CHECK(obj["x"].is_number_float());
        CHECK(obj["n"].is_number_integer());
        CHECK(obj["ok"].is_boolean());
    }
    CHECK(rows[1]["name"].get<std::string>() == "has,comma");
    CHECK(rows[1]["x"].get<double>() == 1.0 / 3.0);
    CHECK(rows[3]["name"].get<std::string>() == "two\nlines");
    CHECK(rows[3]["n"].get<long long>() == 9007199254740993ll);

    CHECK(critline::render_report(mixed_table(), ReportFormat::json) == out);
}

TEST_CASE("row arity and format names are gated") {
    ReportTable t;
    t.columns = {"a", "b"};
    CHECK_THROWS_AS(t.add_row({1.0}), critline::precondition_error);
    CHECK_THROWS_AS(t.add_row({1.0, 2.0, 3.0}), critline::precondition_error);
    t.add_row({1.0, 2.0});
    REQUIRE(t.rows.size() == 1);

    CHECK(critline::parse_report_format("csv") == ReportFormat::csv);
    CHECK(critline::parse_report_format("json") == ReportFormat::json);
    CHECK_THROWS_AS(critline::parse_report_format("yaml"), critline::precondition_error);
    CHECK_THROWS_AS(critline::parse_report_format("CSV"), critline::precondition_error);
}

TEST_CASE("report files carry only deterministic bytes, sidecar keeps the timestamp") {
    ReportTable t = mixed_table();
    std::string path = temp_path("report_test.csv");
    critline::write_report(path, t, ReportFormat::csv);
    CHECK(slurp(path) == critline::render_csv(t));

    auto meta = nlohmann::ordered_json::parse(slurp(path + ".meta"));
    REQUIRE(meta.contains("created"));
    REQUIRE(meta.contains("rows"));
    CHECK(meta["rows"].get<std::size_t>() == t.rows.size());
    std::string created = meta["created"].get<std::string>();
    REQUIRE(created.size() == 20);
    CHECK(created[4] == '-');
    CHECK(created[10] == 'T');
    CHECK(created.back() == 'Z');

    std::string first = slurp(path);
    critline::write_report(path, t, ReportFormat::csv);
    CHECK(slurp(path) == first);

    std::remove(path.c_str());
    std::remove((path + ".meta").c_str());
    CHECK_THROWS_AS(critline::write_report("/no/such/dir/report.csv", t, ReportFormat::csv),
                    critline::io_error);
}

TEST_CASE("tolerance names are validated and values must stay positive") {
    critline::ToleranceSet tols;
    CHECK(tols.get("fe_zeta") == 1e-8);
    CHECK(tols.get("hadamard_rel") == 1e-2);
    CHECK(tols.get("zero_refine") == 1e-9);
    CHECK_THROWS_AS(tols.get("banana"), critline::precondition_error);

    tols.set("fe_zeta", 1e-6);
    CHECK(tols.get("fe_zeta") == 1e-6);
    CHECK_THROWS_AS(tols.set("banana", 1.0), critline::precondition_error);
    CHECK_THROWS_AS(tols.set("fe_zeta", 0.0), critline::precondition_error);
    CHECK_THROWS_AS(tols.set("fe_zeta", -1e-9), critline::precondition_error);
}

TEST_CASE("complex values format with an explicit imaginary sign") {
    CHECK(critline::detail::fmt_complex(cplx(2.0, 0.0)) == "2+0i");
    CHECK(critline::detail::fmt_complex(cplx(0.5, 5.0)) == "0.5+5i");
    CHECK(critline::detail::fmt_complex(cplx(1.5, -2.0)) == "1.5-2i");
    CHECK(critline::detail::fmt_complex(cplx(-0.25, -0.75)) == "-0.25-0.75i");
}

TEST_CASE("sliced parallel execution is complete and thread-count independent") {
    const std::size_t n = 1537;
    auto run = [n](int threads) {
        std::vector<double> slots(n, -1.0);
        critline::detail::parallel_for_index(n, threads, [&](std::size_t i) {
            slots[i] = std::sqrt(static_cast<double>(i)) + static_cast<double>(i % 17);
        });
        return slots;
    };
    std::vector<double> serial = run(1);
    for (double v : serial) CHECK(v >= 0.0);
    CHECK(run(4) == serial);
    CHECK(run(13) == serial);
    CHECK(run(0) == serial);
}
