#include <catch2/catch_amalgamated.hpp>

#include "cmap/csv.hpp"
#include "cmap/rng.hpp"
#include "cmap/util.hpp"

using namespace cmap;

TEST_CASE("string helpers") {
    CHECK(trim("  a b \t\n") == "a b");
    CHECK(trim("") == "");
    CHECK(to_lower_ascii("AbC-Über") == "abc-Über"); // ASCII only, bytes >= 0x80 untouched
    CHECK(split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split_list(" a , b ,c ", ',') == std::vector<std::string>{"a", "b", "c"});
    CHECK(join(std::vector<std::string>{"x", "y"}, ", ") == "x, y");
}

TEST_CASE("double formatting round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 2.772588722239781, 1e-300, 123456789.123456789, -0.0, 0.0}) {
        std::string s = fmt_double(v);
        double back = parse_double(s);
        if (v == 0.0) {
            CHECK(s == "0"); // -0 normalized
            CHECK(back == 0.0);
        } else {
            CHECK(back == v);
        }
    }
    CHECK(fmt_fixed(1.0 / 3.0, 2) == "0.33");
    CHECK(fmt_fixed(-0.001, 2) == "0.00"); // no negative zero in output
    CHECK(fmt_fixed(2.0, 2) == "2.00");
}

TEST_CASE("parse helpers report failure") {
    bool ok = true;
    parse_double("zazzle", &ok);
    CHECK_FALSE(ok);
    CHECK_THROWS_AS(parse_double("zazzle"), DataError);
    ok = true;
    parse_int("1.5", &ok);
    CHECK_FALSE(ok);
    CHECK(parse_int("-17") == -17);
}

TEST_CASE("fnv1a64 is stable") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull); // published FNV-1a test vector
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("csv parser handles RFC 4180") {
    auto rows = parse_csv("a,b\n\"x,y\",\"he said \"\"hi\"\"\"\n\"multi\nline\",z\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"a", "b"});
    CHECK(rows[1] == std::vector<std::string>{"x,y", "he said \"hi\""});
    CHECK(rows[2] == std::vector<std::string>{"multi\nline", "z"});

    CHECK_THROWS_AS(parse_csv("\"unterminated"), DataError);

    // escape round-trip
    std::vector<std::string> cells{"plain", "with,comma", "with\"quote", "with\nnewline"};
    auto back = parse_csv(csv_row(cells));
    REQUIRE(back.size() == 1);
    CHECK(back[0] == cells);
}

TEST_CASE("rng is deterministic and well-ranged") {
    Rng a(7), b(7);
    for (int i = 0; i < 1000; ++i) {
        double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    Rng c(7);
    double first = c.uniform();
    Rng d(8);
    CHECK(first != d.uniform()); // different seed, different stream

    Rng e(42);
    double mean = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) mean += e.gaussian();
    mean /= n;
    CHECK(std::abs(mean) < 0.05);
}
