#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "nbm/io.hpp"

using namespace nbm;

TEST_CASE("CSV with header, comments and blank lines") {
    std::istringstream in("# data\nx,y\n\n1, 1\n3,2\n5.1,3\n");
    const auto p = read_points_csv(in);
    CHECK(p.coordinates == fixtures::rows({{1, 1}, {3, 2}, {5.1, 3}}));
    CHECK(p.literals[2][0] == "5.1");
    CHECK_FALSE(p.tolerance.has_value());
}

TEST_CASE("CSV without header") {
    std::istringstream in("1e-1,-2\n+3,4\n");
    const auto p = read_points_csv(in);
    CHECK(p.coordinates == fixtures::rows({{0.1, -2}, {3, 4}}));
}

TEST_CASE("malformed CSV") {
    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS(read_points_csv(ragged));
    std::istringstream text("1,2\n3,abc\n");
    CHECK_THROWS(read_points_csv(text));
    std::istringstream empty("x,y\n");
    CHECK_THROWS(read_points_csv(empty));
}

TEST_CASE("JSON points with tolerance") {
    std::istringstream in(R"({"points": [[1.1, 1.1], [0.9, "-1.1"]], "tolerance": [0.12, 0.12]})");
    const auto p = read_points_json(in);
    CHECK(p.coordinates == fixtures::rows({{1.1, 1.1}, {0.9, -1.1}}));
    REQUIRE(p.tolerance.has_value());
    CHECK((*p.tolerance)(1) == 0.12);
    CHECK(p.literals[1][1] == "-1.1");
    CHECK(to_rational(p).point(0)[0] == parse_rational("1.1"));
    std::istringstream bad(R"({"pts": []})");
    CHECK_THROWS(read_points_json(bad));
}

TEST_CASE("tolerance syntax") {
    CHECK(parse_tolerance("0.15,0", 2) == fixtures::vec({0.15, 0}));
    CHECK(parse_tolerance("0.018", 2) == fixtures::vec({0.018, 0.018}));
    CHECK_THROWS(parse_tolerance("0.1,0.2,0.3", 2));
    CHECK_THROWS(parse_tolerance("-1", 2));
    CHECK_THROWS(parse_tolerance("x", 2));
}

TEST_CASE("number rendering") {
    CHECK(shortest_decimal(0.1) == "0.1");
    CHECK(std::stod(shortest_decimal(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(to_display_string(parse_rational("90.1")) == "90.1");
    CHECK(to_display_string(parse_rational("-0.025")) == "-0.025");
    CHECK(to_display_string(Rational(1, 3)) == "1/3");
    CHECK(to_display_string(Rational(-7)) == "-7");
}

TEST_CASE("polynomial text") {
    const VariableNames names(2);
    const std::vector<PowerProduct> support{PowerProduct({1, 0}), PowerProduct({0, 1}), PowerProduct({0, 0})};
    CHECK(format_polynomial(support, {1, -2.05, 1.0666666}, names, 5) == "x - 2.05 y + 1.06667");
    CHECK(format_polynomial(support, {1, 0, -1}, names, 5) == "x - 1");
    CHECK(format_polynomial(support, {-1, 1e-7, 2}, names, 3) == "-x + 1e-07 y + 2");
    CHECK(format_terms({PowerProduct({0, 0}), PowerProduct({0, 2})}, names) == "{1, y^2}");
}

TEST_CASE("text report of the nearly aligned points") {
    const auto r = run_nbm(fixtures::nearly_aligned(), TermOrdering::deglex(2));
    const std::string text = format_text(r, VariableNames(2), 5, false);
    CHECK(text.find("O = {1, y, y^2}") != std::string::npos);
    CHECK(text.find("g1 = x - 2.05 y + 1.06667") != std::string::npos);
    CHECK(text.find("score = 0.0162") != std::string::npos);
    CHECK(text.find("g2 = y^3 - 6 y^2 + 11 y - 6") != std::string::npos);
}

TEST_CASE("JSON report field order and round trip") {
    for (const auto& x : {fixtures::nearly_aligned(), fixtures::hyperbola_circle(0.018), fixtures::tilted_square(), fixtures::circle()}) {
        const auto r = run_nbm(x, TermOrdering::deglex(2));
        const Json j = to_json(r);
        std::vector<std::string> keys;
        for (const auto& [k, v] : j.items()) keys.push_back(k);
        CHECK(keys == std::vector<std::string>{"ordering", "dimension", "order_ideal", "polynomials", "steps",
                                               "diagnostics"});
        const NbmResult back = nbm_result_from_json(Json::parse(j.dump()));
        CHECK(back == r);
    }
}

TEST_CASE("exact basis JSON uses exact coefficients") {
    const auto p = [] {
        std::istringstream in("1,1\n3,2\n5.1,3\n");
        return read_points_csv(in);
    }();
    const VariableNames names(2);
    const Json j = to_json(exact_bm(to_rational(p), TermOrdering::deglex(2)), names);
    CHECK(j["polynomials"][2]["coefficients"][1] == "-901/10");
    CHECK(j["polynomials"][2]["text"] == "x^2 - 90.1 x + 172.2 y - 83.1");
}
