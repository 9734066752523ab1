// CSV ingestion: labeled and unlabeled parsing, label interning, and the
// error messages that name the offending line.

#include <doctest.h>

#include <senc/csv.hpp>

#include <sstream>
#include <stdexcept>
#include <string>

using namespace senc;

TEST_CASE("labeled rows intern labels in order of first appearance") {
    std::stringstream in("1.5,2.5,cat\n3.25,-4,dog\n1,2,cat\n");
    LabeledCsv csv = read_labeled_csv(in, /*has_header=*/false);

    REQUIRE(csv.data.size() == 3);
    CHECK(csv.data.dimension == 2);
    CHECK(csv.data.items[0].features == Instance{1.5, 2.5});
    CHECK(csv.data.items[0].label == 1);
    CHECK(csv.data.items[1].label == 2);
    CHECK(csv.data.items[2].label == 1);
    CHECK(csv.labels.name(1) == "cat");
    CHECK(csv.labels.name(2) == "dog");
    CHECK(csv.labels.find("dog") == 2);
    CHECK_FALSE(csv.labels.find("emu").has_value());
    CHECK_THROWS_AS(csv.labels.name(3), std::out_of_range);
}

TEST_CASE("the header flag skips the first row") {
    std::stringstream in("x,y,label\n1,2,a\n");
    LabeledCsv csv = read_labeled_csv(in, true);
    REQUIRE(csv.data.size() == 1);
    CHECK(csv.labels.name(1) == "a");
}

TEST_CASE("blank lines are skipped") {
    std::stringstream in("1,2,a\n\n\n3,4,b\n");
    CHECK(read_labeled_csv(in, false).data.size() == 2);
}

TEST_CASE("parse errors name the offending line") {
    std::stringstream bad_number("1,2,a\n1,zap,b\n");
    try {
        read_labeled_csv(bad_number, false);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    std::stringstream ragged("1,2,a\n1,2,3,b\n");
    CHECK_THROWS_AS(read_labeled_csv(ragged, false), std::runtime_error);

    std::stringstream non_finite("inf,2,a\n");
    CHECK_THROWS_AS(read_labeled_csv(non_finite, false), std::runtime_error);

    std::stringstream empty("");
    CHECK_THROWS_AS(read_labeled_csv(empty, false), std::runtime_error);
}

TEST_CASE("unlabeled rows are all features") {
    std::stringstream in("1,2,3\n4,5,6\n");
    auto rows = read_unlabeled_csv(in, false);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == Instance{1.0, 2.0, 3.0});
    CHECK(rows[1] == Instance{4.0, 5.0, 6.0});
}
