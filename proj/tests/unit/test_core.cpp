#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>

#include "linklogic/rng.hpp"
#include "linklogic/types.hpp"
#include "linklogic/util.hpp"

using namespace linklogic;

TEST_CASE("format_double round-trips exactly") {
  for (const double x : {0.0, 1.0, -1.0, 0.1, 1.0 / 3.0, 6.02e23, 1e-300, -2.5e-7,
                         123456789.123456789, 0.8597}) {
    const std::string text = format_double(x);
    CHECK(std::strtod(text.c_str(), nullptr) == x);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("crc32 matches the reference check value and chains") {
  const char* check = "123456789";
  CHECK(crc32(check, 9) == 0xCBF43926u);
  CHECK(crc32("", 0) == 0u);
  const std::uint32_t first = crc32("1234", 4);
  CHECK(crc32("56789", 5, first) == 0xCBF43926u);
}

TEST_CASE("fnv1a matches the reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("splitmix64 matches the reference sequence start") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
}

TEST_CASE("mt19937_64 engine is the standard one") {
  std::mt19937_64 reference;  // default seed 5489
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = reference();
  CHECK(x == 9981545732273789042ull);
}

TEST_CASE("rng is deterministic and in range") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng c(7);
  for (int i = 0; i < 5000; ++i) {
    CHECK(c.uniform_index(7) < 7);
  }
}

TEST_CASE("rng normal has plausible first and second moments") {
  Rng rng(42);
  const int n = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);      // ~4 sigma of the mean estimator
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("rng shuffle is a deterministic permutation") {
  std::vector<int> v(20);
  for (int i = 0; i < 20; ++i) v[i] = i;
  auto w = v;
  Rng(99).shuffle(v);
  Rng(99).shuffle(w);
  CHECK(v == w);
  std::set<int> unique(v.begin(), v.end());
  CHECK(unique.size() == 20);
  auto u = w;
  Rng(100).shuffle(u);
  CHECK(u != v);  // different seed, different order (for this size)
}

TEST_CASE("matrix storage is row-major with span rows") {
  Matrix m(2, 3);
  m(0, 0) = 1.0;
  m(0, 2) = 3.0;
  m(1, 1) = 5.0;
  CHECK(m.row(0)[2] == 3.0);
  CHECK(m.row(1)[1] == 5.0);
  CHECK(m.data[5] == 0.0);
  CHECK(m.data.size() == 6);
}

TEST_CASE("file io round-trips and reports missing files") {
  const auto path = std::filesystem::temp_directory_path() / "linklogic_util_test.txt";
  write_file(path, "alpha\nbeta");
  CHECK(read_file(path) == "alpha\nbeta");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_file(path), IoError);
}

TEST_CASE("csv rows join with commas and newline") {
  CHECK(join_csv_row({"a", "b", "c"}) == "a,b,c\n");
  CHECK(join_csv_row({}) == "\n");
  CHECK(join_csv_row({"solo"}) == "solo\n");
}

TEST_CASE("parallel_for covers every index exactly once") {
  const std::size_t n = 5000;
  std::vector<std::atomic<int>> hits(n);
  parallel_for(n, 4, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (std::size_t i = 0; i < n; ++i) CHECK(hits[i].load() == 1);
}

TEST_CASE("parallel_for rethrows the first worker exception") {
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 37) throw NumericError("boom");
                               }),
                  NumericError);
}

TEST_CASE("entity types round-trip through strings") {
  for (const EntityType type :
       {EntityType::Person, EntityType::Location, EntityType::Institution,
        EntityType::Profession, EntityType::Ethnicity, EntityType::CauseOfDeath,
        EntityType::Religion, EntityType::Gender, EntityType::Unknown}) {
    const auto parsed = entity_type_from_string(to_string(type));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == type);
  }
  CHECK_FALSE(entity_type_from_string("nonsense").has_value());
}

TEST_CASE("name tables intern in first-seen order") {
  NameTable table;
  CHECK(table.add("x") == 0);
  CHECK(table.add("y") == 1);
  CHECK(table.add("x") == 0);
  CHECK(table.size() == 2);
  CHECK(table.name(1) == "y");
  CHECK(table.find("y") == 1u);
  CHECK_FALSE(table.find("z").has_value());
  CHECK_THROWS_AS(table.name(2), LookupError);
}

TEST_CASE("vocabulary name hash tracks content") {
  Vocabulary a;
  a.entities().add("e1");
  a.relations().add("r1");
  Vocabulary b;
  b.entities().add("e1");
  b.relations().add("r1");
  CHECK(a.name_hash() == b.name_hash());
  b.entities().add("e2");
  CHECK(a.name_hash() != b.name_hash());
}
