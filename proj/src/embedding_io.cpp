#include "linklogic/embedding_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "linklogic/util.hpp"

namespace linklogic {

namespace {

// Streams bytes to the file while folding them into a running CRC.
class CrcWriter {
 public:
  explicit CrcWriter(const std::filesystem::path& path)
      : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) {
      throw IoError("cannot open embedding file for writing: " + path.string());
    }
  }

  void write(const void* data, std::size_t size) {
    crc_ = crc32(data, size, crc_);
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out_) {
      throw IoError("write failure on embedding file: " + path_.string());
    }
  }

  void write_u32(std::uint32_t value) {
    std::array<unsigned char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(value >> (8 * i));
    write(b.data(), b.size());
  }

  void write_u64(std::uint64_t value) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(value >> (8 * i));
    write(b.data(), b.size());
  }

  void write_doubles(const std::vector<double>& values) {
    // Chunked little-endian conversion keeps memory bounded for large stores.
    std::array<unsigned char, 8 * 4096> buffer{};
    std::size_t i = 0;
    while (i < values.size()) {
      const std::size_t n = std::min<std::size_t>(4096, values.size() - i);
      for (std::size_t j = 0; j < n; ++j) {
        const auto bits = std::bit_cast<std::uint64_t>(values[i + j]);
        for (int k = 0; k < 8; ++k) {
          buffer[8 * j + k] = static_cast<unsigned char>(bits >> (8 * k));
        }
      }
      write(buffer.data(), 8 * n);
      i += n;
    }
  }

  std::uint32_t crc() const { return crc_; }

  void finish_with_crc() {
    const std::uint32_t value = crc_;
    std::array<unsigned char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(value >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b.data()), b.size());
    out_.flush();
    if (!out_) {
      throw IoError("write failure on embedding file: " + path_.string());
    }
  }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::uint32_t crc_ = 0;
};

class CrcReader {
 public:
  explicit CrcReader(const std::filesystem::path& path)
      : in_(path, std::ios::binary), path_(path) {
    if (!in_) {
      throw IoError("cannot open embedding file: " + path.string());
    }
  }

  void read(void* data, std::size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in_.gcount()) != size) {
      throw IoError("embedding file truncated: " + path_.string());
    }
    crc_ = crc32(data, size, crc_);
  }

  std::uint32_t read_u32() {
    std::array<unsigned char, 4> b{};
    read(b.data(), b.size());
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) value |= std::uint32_t{b[i]} << (8 * i);
    return value;
  }

  std::uint64_t read_u64() {
    std::array<unsigned char, 8> b{};
    read(b.data(), b.size());
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value |= std::uint64_t{b[i]} << (8 * i);
    return value;
  }

  void read_doubles(std::vector<double>& values) {
    std::array<unsigned char, 8 * 4096> buffer{};
    std::size_t i = 0;
    while (i < values.size()) {
      const std::size_t n = std::min<std::size_t>(4096, values.size() - i);
      read(buffer.data(), 8 * n);
      for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) {
          bits |= std::uint64_t{buffer[8 * j + k]} << (8 * k);
        }
        values[i + j] = std::bit_cast<double>(bits);
      }
      i += n;
    }
  }

  // Reads the trailing CRC without folding it into the running value.
  std::uint32_t read_trailing_crc() {
    std::array<unsigned char, 4> b{};
    in_.read(reinterpret_cast<char*>(b.data()), b.size());
    if (static_cast<std::size_t>(in_.gcount()) != b.size()) {
      throw IoError("embedding file truncated: " + path_.string());
    }
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) value |= std::uint32_t{b[i]} << (8 * i);
    return value;
  }

  std::uint32_t crc() const { return crc_; }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  std::uint32_t crc_ = 0;
};

std::string hash_to_hex(std::uint64_t hash) {
  static const char* digits = "0123456789abcdef";
  std::string out = "0x";
  for (int i = 15; i >= 0; --i) {
    out += digits[(hash >> (4 * i)) & 0xf];
  }
  return out;
}

}  // namespace

void save_embeddings(const std::filesystem::path& path, const EmbeddingStore& store,
                     const nlohmann::json& config, std::uint64_t name_hash) {
  CrcWriter writer(path);
  writer.write("LLKE", 4);
  writer.write_u32(kEmbeddingFormatVersion);
  writer.write_u64(store.num_entities());
  writer.write_u64(store.num_relations());
  writer.write_u64(store.dim());
  writer.write_doubles(store.entity_re_data());
  writer.write_doubles(store.entity_im_data());
  writer.write_doubles(store.relation_re_data());
  writer.write_doubles(store.relation_im_data());
  writer.finish_with_crc();

  nlohmann::json sidecar{
      {"entities", store.num_entities()},
      {"relations", store.num_relations()},
      {"dim", store.dim()},
      {"name_table_hash", hash_to_hex(name_hash)},
      {"config", config},
  };
  write_file(path.string() + ".json", sidecar.dump(2) + "\n");
}

LoadedEmbeddings load_embeddings(const std::filesystem::path& path,
                                 const Vocabulary* expected_vocab) {
  CrcReader reader(path);
  char magic[4] = {};
  reader.read(magic, 4);
  if (std::memcmp(magic, "LLKE", 4) != 0) {
    throw IoError("not an embedding file (bad magic): " + path.string());
  }
  const std::uint32_t version = reader.read_u32();
  if (version != kEmbeddingFormatVersion) {
    throw IoError("unsupported embedding file version " + std::to_string(version) + ": " +
                  path.string());
  }
  const std::uint64_t n_entities = reader.read_u64();
  const std::uint64_t n_relations = reader.read_u64();
  const std::uint64_t dim = reader.read_u64();
  if (dim == 0 || dim > (1u << 20) || n_entities > (1ull << 32) || n_relations > (1ull << 32)) {
    throw IoError("implausible embedding file header: " + path.string());
  }

  LoadedEmbeddings result{EmbeddingStore(n_entities, n_relations, dim), nlohmann::json()};
  reader.read_doubles(result.store.entity_re_data());
  reader.read_doubles(result.store.entity_im_data());
  reader.read_doubles(result.store.relation_re_data());
  reader.read_doubles(result.store.relation_im_data());
  const std::uint32_t computed = reader.crc();
  const std::uint32_t stored = reader.read_trailing_crc();
  if (computed != stored) {
    throw IoError("embedding file CRC mismatch: " + path.string());
  }

  const auto sidecar_path = path.string() + ".json";
  if (std::filesystem::exists(sidecar_path)) {
    result.sidecar = nlohmann::json::parse(read_file(sidecar_path), nullptr, true, true);
  }

  if (expected_vocab) {
    if (expected_vocab->entities().size() != n_entities ||
        expected_vocab->relations().size() != n_relations) {
      throw IoError("embedding file does not match the dataset: file has " +
                    std::to_string(n_entities) + " entities / " + std::to_string(n_relations) +
                    " relations, dataset has " +
                    std::to_string(expected_vocab->entities().size()) + " / " +
                    std::to_string(expected_vocab->relations().size()));
    }
    if (!result.sidecar.is_null() && result.sidecar.contains("name_table_hash")) {
      const std::string expected_hash = hash_to_hex(expected_vocab->name_hash());
      const std::string stored_hash = result.sidecar["name_table_hash"].get<std::string>();
      if (expected_hash != stored_hash) {
        log_event("embeddings.name_hash_mismatch",
                  {{"file", stored_hash}, {"dataset", expected_hash}});
      }
    }
  }
  return result;
}

}  // namespace linklogic
