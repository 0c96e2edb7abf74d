#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "linklogic/embedding.hpp"
#include "linklogic/embedding_io.hpp"
#include "linklogic/graph.hpp"
#include "linklogic/rng.hpp"
#include "linklogic/train.hpp"
#include "linklogic/util.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace linklogic;
using namespace linklogic::testing;

namespace {

std::shared_ptr<Vocabulary> counting_vocab(std::size_t n_entities, std::size_t n_relations) {
  auto vocab = std::make_shared<Vocabulary>();
  for (std::size_t e = 0; e < n_entities; ++e) vocab->entities().add("e" + std::to_string(e));
  for (std::size_t r = 0; r < n_relations; ++r) vocab->relations().add("r" + std::to_string(r));
  return vocab;
}

}  // namespace

TEST_CASE("raw scores match the complex-arithmetic oracle") {
  for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto store = random_store(6, 3, 4, seed);
    for (EntityId h = 0; h < 6; ++h) {
      for (RelationId r = 0; r < 3; ++r) {
        for (EntityId t = 0; t < 6; ++t) {
          const double got = score_raw(store, h, r, t);
          const double want = oracle_score(store, h, r, t);
          CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("a zero-imaginary relation scores head and tail symmetrically, bit for bit") {
  auto store = random_store(8, 2, 16, 99);
  for (double& v : store.relation_im_data()) v = 0.0;
  for (EntityId h = 0; h < 8; ++h) {
    for (EntityId t = 0; t < 8; ++t) {
      CHECK(score_raw(store, h, 0, t) == score_raw(store, t, 0, h));
      CHECK(score_raw(store, h, 1, t) == score_raw(store, t, 1, h));
    }
  }
}

TEST_CASE("plausibility is a clamped sigmoid") {
  CHECK(plausibility_from_score(0.0) == 0.5);
  CHECK(plausibility_from_score(1e6) == 1.0 - 1e-12);
  CHECK(plausibility_from_score(-1e6) == 1e-12);
  CHECK(plausibility_from_score(2.0) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-15));
  CHECK(plausibility_from_score(-700.0) == 1e-12);  // exp underflow path
  CHECK(clamp_plausibility(0.0) == 1e-12);
  CHECK(clamp_plausibility(1.0) == 1.0 - 1e-12);
  CHECK(clamp_plausibility(0.25) == 0.25);
  // Monotone in the raw score.
  double prev = 0.0;
  for (double s = -40.0; s <= 40.0; s += 0.5) {
    const double f = plausibility_from_score(s);
    CHECK(f >= prev);
    prev = f;
  }
  const auto store = random_store(3, 2, 4, 5);
  CHECK(plausibility(store, 1, 0, 2) ==
        doctest::Approx(oracle_plausibility(oracle_score(store, 1, 0, 2))).epsilon(1e-12));
}

TEST_CASE("top-k candidate lists match a full-sort oracle") {
  const auto store = random_store(40, 3, 6, 123);
  for (RelationId r = 0; r < 3; ++r) {
    for (const std::size_t k : {1u, 5u, 39u, 40u, 1000u}) {
      const auto tails = top_k_tails(store, 7, r, k);
      const auto want_tails = oracle_top_tails(store, 7, r, k);
      REQUIRE(tails.size() == want_tails.size());
      for (std::size_t i = 0; i < tails.size(); ++i) {
        CHECK(tails[i].first == want_tails[i].first);
        CHECK(tails[i].second == doctest::Approx(want_tails[i].second).epsilon(1e-12));
      }
      const auto heads = top_k_heads(store, r, 11, k);
      const auto want_heads = oracle_top_heads(store, r, 11, k);
      REQUIRE(heads.size() == want_heads.size());
      for (std::size_t i = 0; i < heads.size(); ++i) {
        CHECK(heads[i].first == want_heads[i].first);
      }
    }
  }
}

TEST_CASE("top-k breaks score ties by ascending id") {
  // All-identical entities: every candidate scores the same.
  EmbeddingStore store(5, 1, 2);
  std::fill(store.entity_re_data().begin(), store.entity_re_data().end(), 0.5);
  std::fill(store.relation_re_data().begin(), store.relation_re_data().end(), 1.0);
  const auto top = top_k_tails(store, 0, 0, 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0].first == 0);
  CHECK(top[1].first == 1);
  CHECK(top[2].first == 2);
}

TEST_CASE("example_loss gradients agree with central finite differences") {
  const std::size_t dim = 8;
  auto store = random_store(6, 2, dim, 2718);
  const Triple positive{0, 1, 2};
  const std::vector<Triple> negatives{{3, 1, 2}, {0, 1, 4}, {5, 1, 2}, {0, 1, 0}};
  TrainingConfig config;
  config.hidden_dim = dim;
  // Softmax weights are treated as constants in the analytic gradient, so the
  // check runs with uniform weighting where the loss is exactly differentiable.
  config.adversarial_sampling = false;
  config.regularization_coef = 1e-3;

  detail::GradientMap grads;
  detail::example_loss(store, positive, negatives, config, &grads);

  const double eps = 1e-6;
  const auto loss_at = [&] {
    return detail::example_loss(store, positive, negatives, config, nullptr);
  };
  const auto check_block = [&](std::span<double> param, const std::vector<double>& grad) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double saved = param[i];
      param[i] = saved + eps;
      const double up = loss_at();
      param[i] = saved - eps;
      const double down = loss_at();
      param[i] = saved;
      const double fd = (up - down) / (2.0 * eps);
      CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  };
  for (const auto& [id, grad] : grads.ent_re) check_block(store.entity_re(id), grad);
  for (const auto& [id, grad] : grads.ent_im) check_block(store.entity_im(id), grad);
  for (const auto& [id, grad] : grads.rel_re) check_block(store.relation_re(id), grad);
  for (const auto& [id, grad] : grads.rel_im) check_block(store.relation_im(id), grad);

  // Every touched id has a gradient slot.
  CHECK(grads.ent_re.size() == 5);  // entities 0,2,3,4,5
  CHECK(grads.rel_re.size() == 1);
}

TEST_CASE("training memorizes a tiny graph") {
  auto vocab = counting_vocab(8, 2);
  std::vector<Triple> triples;
  for (EntityId e = 0; e < 8; ++e) {
    triples.push_back(Triple{e, 0, static_cast<EntityId>((e + 1) % 8)});
  }
  triples.push_back(Triple{0, 1, 4});
  triples.push_back(Triple{2, 1, 6});
  const KnowledgeGraph graph(vocab, triples);

  TrainingConfig config;
  config.hidden_dim = 16;
  config.batch_size = 32;
  config.neg_sample_size = 8;
  config.learning_rate = 0.05;
  config.max_step = 300;
  config.regularization_coef = 1e-6;
  config.seed = 7;
  config.log_every = 100;

  std::vector<double> losses;
  const auto store = train(graph, config, [&](std::size_t, double loss) {
    losses.push_back(loss);
  });
  CHECK(store.all_finite());
  REQUIRE(losses.size() == 3);
  CHECK(losses.back() < losses.front());

  double mean_true = 0.0;
  for (const Triple& t : graph.triples()) {
    mean_true += plausibility(store, t.head, t.relation, t.tail);
  }
  mean_true /= static_cast<double>(graph.triples().size());
  CHECK(mean_true > 0.8);

  const auto mrr = evaluate_mrr(store, graph.triples(), graph);
  CHECK(mrr.overall > 0.9);
  CHECK(mrr.count == 2 * graph.triples().size());

  // Uniform negative weighting must memorize just as well.
  config.adversarial_sampling = false;
  const auto uniform_store = train(graph, config);
  CHECK(uniform_store.all_finite());
  CHECK(evaluate_mrr(uniform_store, graph.triples(), graph).overall > 0.9);
}

TEST_CASE("training aborts with the failing step when it diverges") {
  auto vocab = counting_vocab(4, 1);
  const KnowledgeGraph graph(vocab, {Triple{0, 0, 1}, Triple{1, 0, 2}, Triple{2, 0, 3}});
  TrainingConfig config;
  config.hidden_dim = 4;
  config.batch_size = 4;
  config.neg_sample_size = 2;
  config.learning_rate = 1e120;
  config.max_step = 10;
  config.seed = 1;
  try {
    train(graph, config);
    FAIL("expected TrainingError");
  } catch (const TrainingError& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("training validates its configuration and inputs") {
  auto vocab = counting_vocab(2, 1);
  const KnowledgeGraph graph(vocab, {Triple{0, 0, 1}});
  TrainingConfig config;
  config.hidden_dim = 0;
  CHECK_THROWS_AS(train(graph, config), ConfigError);
  config.hidden_dim = 4;
  config.learning_rate = 0.0;
  CHECK_THROWS_AS(train(graph, config), ConfigError);
  config.learning_rate = 0.1;
  const KnowledgeGraph empty(vocab, {});
  CHECK_THROWS_AS(train(empty, config), ConfigError);
}

TEST_CASE("filtered MRR ranks exactly on a hand-built store") {
  // d=1, all imaginary parts zero, relation_re = 1: score(h, r, t) = re(h) * re(t).
  EmbeddingStore store(5, 1, 1);
  const double values[5] = {5.0, 4.0, 3.0, 2.0, 1.0};
  for (EntityId e = 0; e < 5; ++e) store.entity_re(e)[0] = values[e];
  store.relation_re(0)[0] = 1.0;

  auto vocab = counting_vocab(5, 1);
  const std::vector<Triple> test{{0, 0, 1}};  // score 20

  // Unfiltered: tail candidate 0 scores 25 > 20 (rank 2); every head
  // candidate scores below 20 (rank 1).
  const KnowledgeGraph empty_filter(vocab, {});
  const auto plain = evaluate_mrr(store, test, empty_filter);
  CHECK(plain.overall == doctest::Approx((0.5 + 1.0) / 2.0).epsilon(1e-12));

  // Filtering (0, r0, 0) removes the only better tail: both ranks become 1.
  const KnowledgeGraph filter(vocab, {Triple{0, 0, 0}});
  const auto filtered = evaluate_mrr(store, test, filter);
  CHECK(filtered.overall == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(filtered.count == 2);
  CHECK(filtered.per_relation.at(0).mrr == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(filtered.per_relation.at(0).count == 2);

  const auto none = evaluate_mrr(store, {}, empty_filter);
  CHECK(none.overall == 0.0);
  CHECK(none.count == 0);
}

TEST_CASE("per-relation MRR averages back to the overall value") {
  const auto store = random_store(30, 3, 4, 31337);
  auto vocab = counting_vocab(30, 3);
  Rng rng(55);
  std::vector<Triple> test;
  for (int i = 0; i < 40; ++i) {
    const auto h = static_cast<EntityId>(rng.uniform_index(30));
    auto t = static_cast<EntityId>(rng.uniform_index(30));
    if (t == h) t = (t + 1) % 30;
    test.push_back(Triple{h, static_cast<RelationId>(rng.uniform_index(3)), t});
  }
  const KnowledgeGraph empty_filter(vocab, {});
  const auto report = evaluate_mrr(store, test, empty_filter);
  double weighted = 0.0;
  std::size_t count = 0;
  for (const auto& [rel, entry] : report.per_relation) {
    weighted += entry.mrr * static_cast<double>(entry.count);
    count += entry.count;
  }
  CHECK(count == report.count);
  CHECK(weighted / static_cast<double>(count) ==
        doctest::Approx(report.overall).epsilon(1e-12));
}

TEST_CASE("MRR of a random store sits near the uniform-rank expectation") {
  const std::size_t n = 50;
  const auto store = random_store(n, 1, 8, 777);
  auto vocab = counting_vocab(n, 1);
  Rng rng(4242);
  std::vector<Triple> test;
  for (int i = 0; i < 100; ++i) {
    const auto h = static_cast<EntityId>(rng.uniform_index(n));
    auto t = static_cast<EntityId>(rng.uniform_index(n));
    if (t == h) t = static_cast<EntityId>((t + 1) % n);
    test.push_back(Triple{h, 0, t});
  }
  const KnowledgeGraph empty_filter(vocab, {});
  const auto report = evaluate_mrr(store, test, empty_filter);
  // With iid scores the true entity's rank is uniform on 1..n, so the
  // expected reciprocal rank is H_n / n ~ 0.09 for n = 50.
  double harmonic = 0.0;
  for (std::size_t k = 1; k <= n; ++k) harmonic += 1.0 / static_cast<double>(k);
  const double expected = harmonic / static_cast<double>(n);
  CHECK(report.overall > expected - 0.04);
  CHECK(report.overall < expected + 0.04);
}

TEST_CASE("embedding files round trip bit for bit") {
  TempDir dir("emb");
  const auto path = dir.path() / "model.bin";
  const auto store = random_store(7, 3, 5, 909);
  auto vocab = counting_vocab(7, 3);
  const nlohmann::json config{{"lr", 0.1}, {"max_step", 10}};
  save_embeddings(path, store, config, vocab->name_hash());

  const auto loaded = load_embeddings(path, vocab.get());
  CHECK(loaded.store.num_entities() == 7);
  CHECK(loaded.store.num_relations() == 3);
  CHECK(loaded.store.dim() == 5);
  CHECK(loaded.store.entity_re_data() == store.entity_re_data());
  CHECK(loaded.store.entity_im_data() == store.entity_im_data());
  CHECK(loaded.store.relation_re_data() == store.relation_re_data());
  CHECK(loaded.store.relation_im_data() == store.relation_im_data());
  CHECK(loaded.sidecar["config"]["lr"] == 0.1);
  CHECK(loaded.sidecar["entities"] == 7);

  // Loading without a vocabulary skips the count check.
  CHECK_NOTHROW(load_embeddings(path));
}

TEST_CASE("corrupt embedding files are rejected") {
  TempDir dir("embbad");
  const auto path = dir.path() / "model.bin";
  const auto store = random_store(4, 2, 3, 1);
  auto vocab = counting_vocab(4, 2);
  save_embeddings(path, store, nlohmann::json::object(), vocab->name_hash());
  const std::string bytes = read_file(path);

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_embeddings(dir.path() / "nope.bin"), IoError);
  }
  SUBCASE("truncated payload") {
    write_file(path, bytes.substr(0, bytes.size() - 12));
    CHECK_THROWS_AS(load_embeddings(path), IoError);
  }
  SUBCASE("flipped payload byte fails the checksum") {
    std::string mangled = bytes;
    mangled[40] = static_cast<char>(mangled[40] ^ 0x10);
    write_file(path, mangled);
    try {
      load_embeddings(path);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("CRC") != std::string::npos);
    }
  }
  SUBCASE("bad magic") {
    std::string mangled = bytes;
    mangled[0] = 'X';
    write_file(path, mangled);
    try {
      load_embeddings(path);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("magic") != std::string::npos);
    }
  }
  SUBCASE("unsupported version") {
    std::string mangled = bytes;
    mangled[4] = static_cast<char>(kEmbeddingFormatVersion + 1);
    write_file(path, mangled);
    try {
      load_embeddings(path);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("version") != std::string::npos);
    }
  }
  SUBCASE("entity count mismatch against the dataset") {
    auto other = counting_vocab(5, 2);
    try {
      load_embeddings(path, other.get());
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("does not match") != std::string::npos);
    }
  }
  SUBCASE("name hash mismatch with matching counts only warns") {
    auto renamed = std::make_shared<Vocabulary>();
    for (int e = 0; e < 4; ++e) renamed->entities().add("other" + std::to_string(e));
    for (int r = 0; r < 2; ++r) renamed->relations().add("rel" + std::to_string(r));
    CHECK_NOTHROW(load_embeddings(path, renamed.get()));
  }
}
