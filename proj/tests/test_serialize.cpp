#include "immax/serialize.hpp"

#include "immax/rng.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace immax;
using immax::testing::random_vector;

TEST_CASE("loss spec config round trip") {
  LossSpec immax_spec;
  immax_spec.kind = LossKind::ImmaxMulti;
  immax_spec.rho.resize(3);
  immax_spec.rho << 0.2, 0.8, 1.0;
  const auto config = loss_spec_to_config(immax_spec);
  CHECK(config.at("loss") == "immax");
  CHECK(config.at("rho") == "0.2,0.8,1");

  const LossSpec parsed = loss_spec_from_config(config);
  CHECK(parsed.kind == LossKind::ImmaxMulti);
  CHECK(parsed.rho == immax_spec.rho);

  LossSpec la;
  la.kind = LossKind::LA;
  la.tau = 0.5;
  const auto la_config = loss_spec_to_config(la);
  CHECK(la_config.at("tau") == "0.5");
  CHECK(loss_spec_from_config(la_config).tau == 0.5);

  SUBCASE("missing parameters raise configuration errors") {
    CHECK_THROWS_AS(loss_spec_from_config({{"loss", "immax"}}), ConfigError);
    CHECK_THROWS_AS(loss_spec_from_config({{"loss", "nope"}}), ConfigError);
    CHECK_THROWS_AS(loss_spec_from_config({{"rho", "1,1"}}), ConfigError);
  }
}

TEST_CASE("scorer round trips are value-exact") {
  SplitMix64 rng(601);
  const std::string path = "immax_test_scorer.txt";

  SUBCASE("binary linear") {
    BinaryLinearScorer scorer;
    scorer.w = random_vector(rng, 5, -2, 2);
    scorer.bias = 0.125 + rng.normal();
    save_scorer(Scorer{scorer}, path);
    const Scorer loaded = load_scorer(path);
    const auto& round = std::get<BinaryLinearScorer>(loaded);
    CHECK(round.w == scorer.w);
    CHECK(round.bias == scorer.bias);
  }
  SUBCASE("multi linear") {
    MultiLinearScorer scorer;
    scorer.W = Matrix::Random(3, 4);
    scorer.bias = random_vector(rng, 3, -1, 1);
    save_scorer(Scorer{scorer}, path);
    const Scorer loaded = load_scorer(path);
    const auto& round = std::get<MultiLinearScorer>(loaded);
    CHECK(round.W == scorer.W);
    CHECK(round.bias == scorer.bias);
  }
  SUBCASE("mlp") {
    MlpScorer scorer;
    scorer.W1 = Matrix::Random(4, 2);
    scorer.b1 = random_vector(rng, 4, -1, 1);
    scorer.W2 = Matrix::Random(3, 4);
    scorer.b2 = random_vector(rng, 3, -1, 1);
    save_scorer(Scorer{scorer}, path);
    const Scorer loaded = load_scorer(path);
    const auto& round = std::get<MlpScorer>(loaded);
    CHECK(round.W1 == scorer.W1);
    CHECK(round.b1 == scorer.b1);
    CHECK(round.W2 == scorer.W2);
    CHECK(round.b2 == scorer.b2);
  }
  SUBCASE("unknown format") {
    std::ofstream out(path);
    out << "scorer v9\nkind binary_linear\n";
    out.close();
    CHECK_THROWS_AS(load_scorer(path), ParseError);
  }
  std::remove(path.c_str());
}

TEST_CASE("config file parsing") {
  const std::string path = "immax_test_config.txt";
  std::ofstream out(path);
  out << "# comment\nloss=immax\nrho=1,1\n\nlambda=0.001\n";
  out.close();
  const auto config = load_config_file(path);
  CHECK(config.at("loss") == "immax");
  CHECK(config.at("lambda") == "0.001");
  CHECK(config.size() == 3);
  std::remove(path.c_str());
}
