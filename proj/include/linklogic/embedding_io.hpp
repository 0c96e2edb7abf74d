#pragma once

#include <filesystem>

#include <json.hpp>

#include "linklogic/embedding.hpp"
#include "linklogic/types.hpp"

namespace linklogic {

// Binary layout (little-endian): "LLKE" magic, u32 version, u64 entity count,
// u64 relation count, u64 dim, then f64 arrays (entity re, entity im,
// relation re, relation im), then u32 CRC32 of everything before it. A JSON
// sidecar at <path>.json records counts, the vocabulary name hash, and the
// fully resolved training config.
inline constexpr std::uint32_t kEmbeddingFormatVersion = 1;

void save_embeddings(const std::filesystem::path& path, const EmbeddingStore& store,
                     const nlohmann::json& config, std::uint64_t name_hash);

struct LoadedEmbeddings {
  EmbeddingStore store;
  nlohmann::json sidecar;  // null when the sidecar file is absent
};

// Throws IoError on missing/truncated files, bad magic/version, or CRC
// mismatch. When a vocabulary is given, entity/relation counts must match
// (IoError otherwise); a name-hash mismatch with matching counts only logs a
// warning, since counts are the load contract.
LoadedEmbeddings load_embeddings(const std::filesystem::path& path,
                                 const Vocabulary* expected_vocab = nullptr);

}  // namespace linklogic
