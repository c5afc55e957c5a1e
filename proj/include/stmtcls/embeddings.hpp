#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "stmtcls/dataset.hpp"

namespace stmtcls {

class EmbeddingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Token to vector table. Indices are dense from 1; row 0 of `matrix()` is
/// the zero padding vector.
class Vocabulary {
public:
  Vocabulary() = default;
  /// Index-only vocabulary (no vectors, dimension 0).
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);
  /// Adds a token with its vector. Returns false (and keeps the first one)
  /// when the token is already present.
  bool add(const std::string& token, const std::vector<double>& vector);

  std::size_t size() const { return tokens_.size(); }
  std::size_t dimension() const { return dim_; }
  std::optional<std::uint32_t> index(const std::string& token) const;
  const std::string& token(std::uint32_t index) const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  /// (size + 1) x dimension, row 0 zero.
  Eigen::MatrixXd matrix() const;
  Eigen::Map<const Eigen::RowVectorXd> vector(std::uint32_t index) const;

private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t dim_ = 0;
  std::vector<double> data_;  // row-major, first row zero once dim is known
};

struct LoadReport {
  std::size_t duplicates = 0;
  std::vector<std::string> warnings;
};

/// Whitespace-separated `token v1 ... vD` lines. A leading `N D` header line
/// (two integers) is skipped.
Vocabulary load_vectors(const std::filesystem::path& path, LoadReport* report = nullptr);
Vocabulary parse_vectors(std::istream& in, LoadReport* report = nullptr);

struct IndexSequence {
  std::vector<std::uint32_t> ids;  // window length, 0 = padding
  std::size_t length = 0;          // in-vocabulary tokens kept
  std::size_t oov = 0;
  bool empty() const { return length == 0; }
};

IndexSequence index_tokens(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                           std::size_t window = kDefaultWindow);
IndexSequence index_paragraph(const NormalizedParagraph& para, const Vocabulary& vocab,
                              std::size_t window = kDefaultWindow);

struct EmbeddedParagraph {
  Eigen::MatrixXd matrix;  // window x dimension
  std::vector<bool> mask;
  int label = -1;
};

EmbeddedParagraph embed(const IndexSequence& indices, const Vocabulary& vocab);

/// Tokens of a serialized paragraph file (all sentences, in order).
std::vector<std::string> serialized_tokens(std::string_view serialized);

}  // namespace stmtcls
