#include "stmtcls/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "stmtcls/text_util.hpp"

namespace stmtcls {

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  Vocabulary v;
  for (const auto& t : tokens) v.add(t, {});
  return v;
}

bool Vocabulary::add(const std::string& token, const std::vector<double>& vector) {
  if (index_.count(token)) return false;
  if (tokens_.empty()) {
    dim_ = vector.size();
    data_.assign(dim_, 0.0);
  } else if (vector.size() != dim_) {
    throw EmbeddingError("vector for '" + token + "' has dimension " + std::to_string(vector.size()) +
                         ", expected " + std::to_string(dim_));
  }
  tokens_.push_back(token);
  index_.emplace(token, static_cast<std::uint32_t>(tokens_.size()));
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::optional<std::uint32_t> Vocabulary::index(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token(std::uint32_t index) const {
  if (index == 0 || index > tokens_.size()) throw EmbeddingError("token index out of range: " + std::to_string(index));
  return tokens_[index - 1];
}

Eigen::MatrixXd Vocabulary::matrix() const {
  Eigen::MatrixXd m(tokens_.size() + 1, dim_);
  for (std::size_t r = 0; r <= tokens_.size(); ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = data_.empty() ? 0.0 : data_[r * dim_ + c];
  return m;
}

Eigen::Map<const Eigen::RowVectorXd> Vocabulary::vector(std::uint32_t index) const {
  if (index > tokens_.size()) throw EmbeddingError("token index out of range: " + std::to_string(index));
  return {data_.data() + index * dim_, static_cast<Eigen::Index>(dim_)};
}

namespace {

bool parse_double(std::string_view s, double& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool is_count(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Vocabulary parse_vectors(std::istream& in, LoadReport* report) {
  Vocabulary vocab;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (lineno == 1 && fields.size() == 2 && is_count(fields[0]) && is_count(fields[1])) continue;
    if (fields.size() < 2) throw EmbeddingError("line " + std::to_string(lineno) + ": no vector values");
    if (dim == 0) dim = fields.size() - 1;
    if (fields.size() - 1 != dim)
      throw EmbeddingError("line " + std::to_string(lineno) + ": " + std::to_string(fields.size() - 1) +
                           " values, expected " + std::to_string(dim));
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; ++i)
      if (!parse_double(fields[i + 1], v[i]))
        throw EmbeddingError("line " + std::to_string(lineno) + ": bad number '" + fields[i + 1] + "'");
    if (!vocab.add(fields[0], v) && report) {
      ++report->duplicates;
      report->warnings.push_back("line " + std::to_string(lineno) + ": duplicate token '" + fields[0] +
                                 "', first occurrence kept");
    }
  }
  return vocab;
}

Vocabulary load_vectors(const std::filesystem::path& path, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw EmbeddingError("cannot read vector file " + path.string());
  return parse_vectors(in, report);
}

IndexSequence index_tokens(const std::vector<std::string>& tokens, const Vocabulary& vocab, std::size_t window) {
  IndexSequence seq;
  seq.ids.assign(window, 0);
  for (const auto& t : tokens) {
    auto idx = vocab.index(t);
    if (!idx) {
      ++seq.oov;
      continue;
    }
    if (seq.length < window) seq.ids[seq.length++] = *idx;
  }
  return seq;
}

IndexSequence index_paragraph(const NormalizedParagraph& para, const Vocabulary& vocab, std::size_t window) {
  return index_tokens(para.tokens(), vocab, window);
}

EmbeddedParagraph embed(const IndexSequence& indices, const Vocabulary& vocab) {
  const auto window = indices.ids.size();
  EmbeddedParagraph e;
  e.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(window), static_cast<Eigen::Index>(vocab.dimension()));
  e.mask.assign(window, false);
  for (std::size_t i = 0; i < window; ++i) {
    const auto id = indices.ids[i];
    if (id == 0) continue;
    if (id > vocab.size()) throw EmbeddingError("index " + std::to_string(id) + " out of range at position " +
                                                std::to_string(i));
    e.matrix.row(static_cast<Eigen::Index>(i)) = vocab.vector(id);
    e.mask[i] = true;
  }
  return e;
}

std::vector<std::string> serialized_tokens(std::string_view serialized) { return split_ws(serialized); }

}  // namespace stmtcls
