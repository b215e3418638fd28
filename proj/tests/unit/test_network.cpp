#include <doctest.h>

#include <algorithm>

#include "../support/oracles.hpp"
#include "reform/error.hpp"
#include "reform/network.hpp"

using namespace reform;

namespace {

bool has_kind(const std::vector<Violation>& vs, const std::string& kind) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

}  // namespace

TEST_SUITE("net-core") {
  TEST_CASE("validate accepts a normalized single node") {
    auto net = oracle::make_network({2}, {{}}, {{0.5, 0.5}});
    CHECK(validate(net).empty());
  }

  TEST_CASE("validate reports a two-node cycle") {
    auto net = oracle::make_network({2, 2}, {{1}, {0}}, {{0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}});
    CHECK(has_kind(validate(net), "acyclicity"));
  }

  TEST_CASE("validate reports an unnormalized row with its sum") {
    auto net = oracle::make_network({2}, {{}}, {{0.6, 0.6}});
    auto vs = validate(net);
    REQUIRE(has_kind(vs, "row_sum"));
    auto it = std::find_if(vs.begin(), vs.end(), [](const Violation& v) { return v.kind == "row_sum"; });
    CHECK(it->variable == 0);
    CHECK(it->message.find("1.2") != std::string::npos);
  }

  TEST_CASE("validate reports dimension, cardinality, parent and negative entries") {
    CHECK(has_kind(validate(oracle::make_network({2}, {{}}, {{1.0}})), "dimension"));
    CHECK(has_kind(validate(oracle::make_network({1}, {{}}, {{1.0}})), "cardinality"));
    CHECK(has_kind(validate(oracle::make_network({2}, {{3}}, {{0.5, 0.5}})), "parent"));
    CHECK(has_kind(validate(oracle::make_network({2}, {{}}, {{1.5, -0.5}})), "negative"));
    auto bad_id = oracle::two_node();
    bad_id.variables[1].id = 7;
    CHECK(has_kind(validate(bad_id), "id"));
  }

  TEST_CASE("evidence validation") {
    auto net = oracle::two_node();
    CHECK(validate(net, Evidence{{{1, 1}}}).empty());
    CHECK_FALSE(validate(net, Evidence{{{2, 0}}}).empty());
    CHECK_FALSE(validate(net, Evidence{{{0, 2}}}).empty());
  }

  TEST_CASE("generator: 30 nodes valid, one node has no edges, determinism") {
    GeneratorParams p;
    auto net = generate_random(p, 11);
    CHECK(net.size() == 30);
    CHECK(validate(net).empty());
    p.n_nodes = 1;
    auto one = generate_random(p, 3);
    CHECK(one.size() == 1);
    CHECK(one.parents[0].empty());
    GeneratorParams q;
    CHECK(write_network(generate_random(q, 99)) == write_network(generate_random(q, 99)));
    CHECK(write_network(generate_random(q, 99)) != write_network(generate_random(q, 100)));
    q.n_nodes = 0;
    CHECK_THROWS_AS(generate_random(q, 1), ConfigError);
  }

  TEST_CASE("generator invariants over 1000 seeds") {
    GeneratorParams p;
    p.n_nodes = 12;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      auto net = generate_random(p, s);
      REQUIRE(validate(net).empty());
      for (int v = 0; v < net.size(); ++v) {
        const auto& ps = net.parents[static_cast<std::size_t>(v)];
        CHECK(static_cast<int>(ps.size()) <= p.max_parents);
        for (int par : ps) CHECK(par < v);
        CHECK(net.cardinality(v) >= 2);
        CHECK(net.cardinality(v) <= p.max_cardinality);
      }
    }
  }

  TEST_CASE("oracle on the two-node network") {
    auto net = oracle::two_node();
    auto post = oracle_marginals(net, {});
    CHECK(post.marginals[1][1] == doctest::Approx(0.41).epsilon(1e-12));
    CHECK(post.evidence_probability == doctest::Approx(1.0));
    auto given = oracle_marginals(net, Evidence{{{1, 1}}});
    CHECK(given.marginals[0][1] == doctest::Approx(0.27 / 0.41).epsilon(1e-12));
    CHECK(given.evidence_probability == doctest::Approx(0.41).epsilon(1e-12));
    CHECK(given.marginals[1][1] == 1.0);
  }

  TEST_CASE("oracle: uniform network gives uniform marginals; vacuous evidence is no evidence") {
    auto net = oracle::make_network({3, 2}, {{}, {0}}, {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5}});
    auto post = oracle_marginals(net, {});
    for (double x : post.marginals[0]) CHECK(x == doctest::Approx(1.0 / 3));
    for (double x : post.marginals[1]) CHECK(x == doctest::Approx(0.5));
  }

  TEST_CASE("oracle errors") {
    GeneratorParams p;
    p.n_nodes = 30;
    auto big = generate_random(p, 1);
    CHECK_THROWS_AS(oracle_marginals(big, {}), JointTooLarge);
    auto net = oracle::make_network({2, 2}, {{}, {0}}, {{1.0, 0.0}, {1.0, 0.0, 0.0, 1.0}});
    CHECK_THROWS_AS(oracle_marginals(net, Evidence{{{1, 1}}}), InconsistentEvidence);
  }

  TEST_CASE("oracle agrees with the test enumeration on random small networks") {
    GeneratorParams p;
    p.n_nodes = 7;
    for (std::uint64_t s = 0; s < 40; ++s) {
      auto net = generate_random(p, s);
      auto ev = random_evidence(net, 0.3, s + 1000);
      auto lib = oracle_marginals(net, ev);
      auto ref = oracle::brute_posterior(net, ev.assignments);
      CHECK(lib.evidence_probability == doctest::Approx(ref.evidence_probability).epsilon(1e-12));
      for (int v = 0; v < net.size(); ++v) {
        double total = 0.0;
        for (int k = 0; k < net.cardinality(v); ++k) {
          CHECK(std::abs(lib.marginals[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)] -
                         ref.marginals[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)]) < 1e-12);
          total += lib.marginals[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)];
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
      }
    }
  }

  TEST_CASE("network document round trip and errors") {
    GeneratorParams p;
    auto net = generate_random(p, 5);
    CHECK(read_network(write_network(net)) == net);
    auto text = write_network(oracle::two_node());
    CHECK_THROWS_AS(read_network(text.substr(0, text.size() / 2)), ParseError);
    auto bad = oracle::make_network({2}, {{}}, {{0.5, 0.4}});
    CHECK_THROWS_AS(read_network(write_network(bad)), ValidationError);
    try {
      read_network(text.substr(0, 20));
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
  }

  TEST_CASE("evidence text round trip") {
    auto ev = parse_evidence("3=1, 5=0");
    CHECK(ev.assignments == std::map<int, int>{{3, 1}, {5, 0}});
    CHECK(parse_evidence(format_evidence(ev)) == ev);
    CHECK(parse_evidence("").empty());
    CHECK_THROWS_AS(parse_evidence("3"), ParseError);
    CHECK_THROWS_AS(parse_evidence("a=1"), ParseError);
  }

  TEST_CASE("random evidence is deterministic and valid") {
    GeneratorParams p;
    auto net = generate_random(p, 2);
    auto a = random_evidence(net, 0.5, 9);
    CHECK(a == random_evidence(net, 0.5, 9));
    CHECK(validate(net, a).empty());
    CHECK(random_evidence(net, 0.0, 9).empty());
    CHECK(random_evidence(net, 1.0, 9).assignments.size() == 30);
  }
}
