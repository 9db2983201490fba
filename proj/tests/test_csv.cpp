#include <doctest.h>

#include "cvplan/csv.hpp"

using namespace cvplan;

TEST_CASE("parse a numeric table") {
    const CsvTable t = parse_csv("x,y,z\n1,2,3\n4.5,-2e-1,0\n");
    CHECK(t.header == std::vector<std::string>{"x", "y", "z"});
    CHECK(t.rows() == 2);
    CHECK(t.column("y")[1] == doctest::Approx(-0.2));
    CHECK(t.column_index("z") == 2);
    CHECK_THROWS_AS(t.column("missing"), InvalidConfig);
}

TEST_CASE("quoted fields and blank lines") {
    const CsvTable t = parse_csv("\"a\",b\r\n1,2\n\n3,4\n");
    CHECK(t.header.front() == "a");
    CHECK(t.rows() == 2);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_csv(""), InvalidConfig);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_csv("a,b\n1,two\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_csv("a,b\n"), InvalidConfig);
}

TEST_CASE("design splitting adds an intercept") {
    const CsvTable t = parse_csv("y,x1,x2\n1,0.5,2\n0,1.5,3\n1,2.5,4\n");
    const DesignData d = split_design(t, "y");
    CHECK(d.x.rows() == 3);
    CHECK(d.x.cols() == 3);  // intercept + 2 predictors
    CHECK((d.x.col(0).array() == 1.0).all());
    CHECK(d.x(1, 1) == doctest::Approx(1.5));
    CHECK(d.y(2) == doctest::Approx(1.0));
    CHECK(d.predictor_names == std::vector<std::string>{"x1", "x2"});
}
