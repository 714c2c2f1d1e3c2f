#include "doctest.h"

#include <cstdio>

#include "randinv/io.hpp"
#include "randinv/models.hpp"
#include "support.hpp"

using namespace randinv;
using namespace testsupport;

TEST_CASE("matrix csv round trips bit-exactly") {
  RngStream rng(808);
  for (int it = 0; it < 20; ++it) {
    auto fn = random_stochastic(2 + rng.next_below(4), 2 + rng.next_below(5), rng);
    auto back = parse_matrix_csv(matrix_to_csv(fn));
    REQUIRE(back.domain() == fn.domain());
    REQUIRE(back.codomain() == fn.codomain());
    for (std::size_t a = 0; a < fn.domain_size(); ++a) {
      for (std::size_t u = 0; u < fn.codomain_size(); ++u) {
        CHECK(back.entry(a, u) == fn.entry(a, u));
      }
    }
  }
}

TEST_CASE("matrix csv accepts the documented shape and rejects malformed input") {
  const std::string good = ",u1,u2\na1,1,0\na2,0.5,0.5\n";
  auto fn = parse_matrix_csv(good);
  CHECK(fn.domain() == std::vector<Label>{"a1", "a2"});
  CHECK(fn.entry(1, 0) == 0.5);

  CHECK_THROWS_AS(parse_matrix_csv(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix_csv("u1,u2\na,1,0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix_csv(",u1,u2\na1,1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix_csv(",u1,u2\na1,one,zero\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix_csv(",u1,u2\na1,0.9,0.2\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_matrix_csv("/nonexistent/m.csv"), std::invalid_argument);
}

TEST_CASE("dist json round trip") {
  Dist d({"u1", "u2", "u3"}, {0.25, 0.5, 0.25});
  auto j = dist_to_json(d);
  CHECK(j.at("labels").size() == 3);
  auto back = dist_from_json(j);
  CHECK(back.labels() == d.labels());
  for (std::size_t i = 0; i < 3; ++i) CHECK(back.prob(i) == d.prob(i));
}

TEST_CASE("family descriptors construct the right families") {
  auto grid = family_from_json(nlohmann::ordered_json::parse(R"({
    "type": "grid",
    "codomain": ["u1", "u2"],
    "classes": [
      {"label": "a", "dists": [[0.9, 0.1]]},
      {"label": "b", "dists": [[0.4, 0.6], [0.2, 0.8]]}
    ]
  })"));
  CHECK(grid->classes() == std::vector<Label>{"a", "b"});
  CHECK(grid->point({"b", {1.0}}).prob(1) == 0.8);

  auto linear = family_from_json(nlohmann::ordered_json::parse(
      R"({"type": "linear31", "n": 50, "delta": 0.1})"));
  CHECK(linear->classes() == std::vector<Label>{"a", "b"});
  CHECK(linear->codomain().size() == 51);

  auto trig = family_from_json(nlohmann::ordered_json::parse(R"({"type": "trig32"})"));
  CHECK(trig->classes() == std::vector<Label>{"a1", "a2"});

  auto cfn = family_from_json(nlohmann::ordered_json::parse(
      R"({"type": "cfn", "f": 0.1, "g": 0.3})"));
  CHECK(cfn->classes().size() == 3);
  CHECK(cfn->codomain().size() == 16);

  CHECK_THROWS_AS(family_from_json(nlohmann::ordered_json::parse(R"({"type": "bogus"})")),
                  std::invalid_argument);
}

TEST_CASE("matrix json shape") {
  auto fn = example22();
  auto j = matrix_to_json(fn);
  CHECK(j.at("domain") == std::vector<std::string>{"a1", "a2"});
  CHECK(j.at("codomain") == std::vector<std::string>{"u1", "u2"});
  CHECK(j.at("rows")[0][0].get<double>() == 1.0);
}
