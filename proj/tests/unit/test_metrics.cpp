#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "linklogic/metrics.hpp"
#include "linklogic/rng.hpp"
#include "linklogic/types.hpp"
#include "oracles.hpp"

using namespace linklogic;
using linklogic::testing::oracle_ndcg;
using V = std::vector<double>;

TEST_CASE("dcg uses the 1-based log2 position discount") {
  const V rels{3.0, 2.0, 1.0};
  CHECK(dcg_at_k(rels, 2, NdcgGain::Linear) ==
        doctest::Approx(3.0 / std::log2(2.0) + 2.0 / std::log2(3.0)).epsilon(1e-12));
  CHECK(dcg_at_k(rels, 10, NdcgGain::Linear) ==
        doctest::Approx(3.0 + 2.0 / std::log2(3.0) + 1.0 / std::log2(4.0)).epsilon(1e-12));
  CHECK(dcg_at_k(rels, 2, NdcgGain::Exponential) ==
        doctest::Approx(7.0 + 3.0 / std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("ndcg fixed rankings match hand-computed values") {
  // Perfect single hit.
  CHECK(ndcg_at_k(V{1.0}, V{1.0, 0.5}, 1) == doctest::Approx(1.0).epsilon(1e-12));
  // Swapped pair: (0.5/1 + 1/log2(3)) / (1/1 + 0.5/log2(3)).
  const double swapped = (0.5 + 1.0 / std::log2(3.0)) / (1.0 + 0.5 / std::log2(3.0));
  CHECK(swapped == doctest::Approx(0.8597).epsilon(5e-5));
  CHECK(ndcg_at_k(V{0.5, 1.0}, V{1.0, 0.5}, 2) == doctest::Approx(swapped).epsilon(1e-12));
  // Miss at rank 1, hit at rank 2: (0 + 1/log2(3)) / 1.
  CHECK(ndcg_at_k(V{0.0, 1.0}, V{1.0}, 2) ==
        doctest::Approx(1.0 / std::log2(3.0)).epsilon(1e-12));
  // Everything found in ideal order.
  CHECK(ndcg_at_k(V{1.0, 1.0, 0.5}, V{1.0, 1.0, 0.5}, 3) == doctest::Approx(1.0).epsilon(1e-12));
  // Short ranking against a deeper pool at k=2: (1/1) / (1 + 1/log2(3)).
  CHECK(ndcg_at_k(V{1.0}, V{1.0, 1.0, 0.5}, 2) ==
        doctest::Approx(1.0 / (1.0 + 1.0 / std::log2(3.0))).epsilon(1e-12));
}

TEST_CASE("ndcg edge cases") {
  CHECK(ndcg_at_k(V{}, V{1.0, 0.5}, 3) == 0.0);
  CHECK(ndcg_at_k(V{0.0, 0.0}, V{0.0, 0.0}, 2) == 0.0);  // zero ideal mass
  CHECK(ndcg_at_k(V{}, V{}, 1) == 0.0);
  CHECK_THROWS_AS(ndcg_at_k(V{1.0}, V{1.0}, 0), ConfigError);
}

TEST_CASE("ndcg agrees with the independent oracle on random instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(8);
    V ranked(n), pool;
    for (auto& r : ranked) r = (rng.uniform_index(3) == 0) ? 0.0 : (rng.uniform_bool() ? 0.5 : 1.0);
    const std::size_t pool_n = n + rng.uniform_index(4);
    for (std::size_t i = 0; i < pool_n; ++i) pool.push_back(rng.uniform_bool() ? 0.5 : 1.0);
    const std::size_t k = 1 + rng.uniform_index(8);
    CHECK(ndcg_at_k(ranked, pool, k) ==
          doctest::Approx(oracle_ndcg(ranked, pool, k)).epsilon(1e-12));
    CHECK(ndcg_at_k(ranked, pool, k, NdcgGain::Exponential) ==
          doctest::Approx(oracle_ndcg(ranked, pool, k, true)).epsilon(1e-12));
  }
}

TEST_CASE("ndcg depends only on rank order, not on score magnitudes") {
  // Build a ranking by ordering items by score; any strictly monotone score
  // transform leaves the ranked relevance list, and so NDCG, unchanged.
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    struct Item {
      double score;
      double relevance;
    };
    std::vector<Item> items;
    for (int i = 0; i < 6; ++i) {
      items.push_back({rng.uniform(), rng.uniform_bool() ? 1.0 : 0.5});
    }
    const auto ranked_by = [&](auto&& transform) {
      auto copy = items;
      std::sort(copy.begin(), copy.end(), [&](const Item& a, const Item& b) {
        return transform(a.score) > transform(b.score);
      });
      V rels;
      for (const auto& item : copy) rels.push_back(item.relevance);
      return rels;
    };
    const V pool{1.0, 1.0, 0.5, 0.5, 0.5};
    const auto base = ranked_by([](double s) { return s; });
    const auto affine = ranked_by([](double s) { return 3.0 * s + 11.0; });
    const auto expo = ranked_by([](double s) { return std::exp(s); });
    CHECK(ndcg_at_k(base, pool, 4) == ndcg_at_k(affine, pool, 4));
    CHECK(ndcg_at_k(base, pool, 4) == ndcg_at_k(expo, pool, 4));
  }
}

TEST_CASE("raising one ranked relevance never lowers ndcg") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    V ranked;
    for (int i = 0; i < 5; ++i) ranked.push_back(rng.uniform_bool() ? 0.5 : 0.0);
    const V pool{1.0, 1.0, 0.5, 0.5, 0.5};
    const std::size_t k = 1 + rng.uniform_index(5);
    const std::size_t bump = rng.uniform_index(5);
    const double before = ndcg_at_k(ranked, pool, k);
    ranked[bump] += 0.5;
    CHECK(ndcg_at_k(ranked, pool, k) >= before - 1e-15);
  }
}

TEST_CASE("r_squared closed forms") {
  const V y{1.0, 2.0, 3.0};
  CHECK(r_squared(y, y) == doctest::Approx(1.0).epsilon(1e-15));
  // ss_res = 0.01 + 0.01 + 0.04 = 0.06, ss_tot = 2 -> 1 - 0.03.
  CHECK(r_squared(y, V{1.1, 1.9, 3.2}) == doctest::Approx(0.97).epsilon(1e-12));
  // Mean predictor scores zero.
  CHECK(r_squared(y, V{2.0, 2.0, 2.0}) == doctest::Approx(0.0).epsilon(1e-15));
  // Worse than the mean goes negative: ss_res = 8.
  CHECK(r_squared(y, V{3.0, 2.0, 1.0}) == doctest::Approx(1.0 - 8.0 / 2.0).epsilon(1e-12));
  // Constant targets define r^2 = 0 here.
  CHECK(r_squared(V{5.0, 5.0}, V{5.0, 5.0}) == 0.0);
  CHECK_THROWS_AS(r_squared(V{1.0}, V{1.0, 2.0}), NumericError);
  CHECK_THROWS_AS(r_squared(V{}, V{}), NumericError);
}
