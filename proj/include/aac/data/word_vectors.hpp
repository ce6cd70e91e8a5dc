#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "aac/data/text.hpp"
#include "aac/model/decoder.hpp"

namespace aac {

/// Every row drawn independently from U(-a, a), a = sqrt(3 / dim), on a
/// per-row stream of `seed`, so row i depends only on (seed, i).
WordEmbeddingTable random_word_table(const Vocabulary& vocab, std::size_t dim, WordSource source, bool trainable,
                                     std::uint64_t seed);

/// Reads the text vector format: an optional `<count> <dim>` header, then
/// `<token> <v1> ... <vdim>` per line. Rows come out in vocabulary order;
/// vocabulary tokens absent from the file get random rows as in
/// random_word_table. The dimension must match the source's declared size.
/// Errors name the offending line.
WordEmbeddingTable load_word_embedding_table(const std::filesystem::path& path, const Vocabulary& vocab,
                                             WordSource source, bool trainable, std::uint64_t seed);

/// Inverse of the loader for a subset of tokens; used to stage test and
/// synthetic vector files.
std::string format_word_vectors(std::span<const std::string> tokens, const Tensor& rows, bool with_header);

}  // namespace aac
