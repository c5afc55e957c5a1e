#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "stmtcls/embeddings.hpp"
#include "stmtcls/text_util.hpp"
#include "support.hpp"

using namespace stmtcls;

TEST_CASE("three-line file gives vocabulary of three") {
  std::istringstream in("a 1 2 3 4\nb 5 6 7 8\nitalic_c 0 0 0 1\n");
  auto v = parse_vectors(in);
  CHECK(v.size() == 3);
  CHECK(v.dimension() == 4);
  CHECK(v.index("a") == std::optional<std::uint32_t>(1));
  CHECK(v.index("italic_c") == std::optional<std::uint32_t>(3));
  CHECK(v.vector(3)(3) == 1.0);
  CHECK(v.matrix().row(0).isZero());
}

TEST_CASE("ragged line is an error naming the line") {
  std::istringstream in("a 1 2 3 4\nb 5 6 7\n");
  CHECK_THROWS_WITH_AS(parse_vectors(in), doctest::Contains("line 2"), EmbeddingError);
  std::istringstream bad("a 1 x 3\n");
  CHECK_THROWS_AS(parse_vectors(bad), EmbeddingError);
}

TEST_CASE("duplicate token keeps first occurrence and warns") {
  std::istringstream in("a 1 1\nb 2 2\na 3 3\n");
  LoadReport rep;
  auto v = parse_vectors(in, &rep);
  CHECK(v.size() == 2);
  CHECK(rep.duplicates == 1);
  CHECK(v.vector(*v.index("a"))(0) == 1.0);
}

TEST_CASE("header line is skipped") {
  std::istringstream in("2 3\na 1 2 3\nb 4 5 6\n");
  CHECK(parse_vectors(in).size() == 2);
}

TEST_CASE("indexing drops OOV by compaction, truncates and pads") {
  auto v = Vocabulary::from_tokens({"a", "b"});
  auto seq = index_tokens({"a", "zzz", "b"}, v, 6);
  CHECK(seq.ids == std::vector<std::uint32_t>{1, 2, 0, 0, 0, 0});
  CHECK(seq.length == 2);
  CHECK(seq.oov == 1);

  std::vector<std::string> many(500, "a");
  auto trunc = index_tokens(many, v, 480);
  CHECK(trunc.ids.size() == 480);
  CHECK(trunc.length == 480);

  auto none = index_tokens({"x", "y"}, v, 4);
  CHECK(none.empty());
  CHECK(none.ids == std::vector<std::uint32_t>(4, 0));
}

TEST_CASE("embedding rows equal stored vectors, padding rows zero") {
  std::istringstream in("a 1 2\nb 3 4\n");
  auto v = parse_vectors(in);
  auto e = embed(index_tokens({"b", "q", "a"}, v, 4), v);
  CHECK(e.matrix.rows() == 4);
  CHECK(e.matrix.cols() == 2);
  CHECK(e.matrix(0, 0) == 3.0);
  CHECK(e.matrix(1, 1) == 2.0);
  CHECK(e.matrix.row(2).isZero());
  CHECK(e.mask == std::vector<bool>{true, true, false, false});

  auto zero = embed(index_tokens({}, v, 3), v);
  CHECK(zero.matrix.isZero());

  IndexSequence bad;
  bad.ids = {5};
  CHECK_THROWS_AS(embed(bad, v), EmbeddingError);
}

TEST_CASE("fixture sentence matches a direct lookup from the vector file") {
  auto v = load_vectors(fixtures_dir() / "vectors.txt");
  // independent lookup: read the file line by line into a map
  std::map<std::string, std::vector<double>> table;
  std::ifstream in(fixtures_dir() / "vectors.txt");
  std::string line;
  while (std::getline(in, line)) {
    auto f = split_ws(line);
    std::vector<double> vec;
    for (std::size_t i = 1; i < f.size(); ++i) vec.push_back(std::stod(f[i]));
    table.emplace(f[0], vec);
  }
  const std::string sentence =
      "importantly note that italic_c is independent of the italic_epsilon POSTSUBSCRIPT_start italic_j POSTSUBSCRIPT_end s";
  auto tokens = split_ws(sentence);
  auto e = embed(index_tokens(tokens, v, 16), v);
  std::size_t row = 0;
  for (const auto& t : tokens) {
    auto it = table.find(t);
    if (it == table.end()) continue;
    for (std::size_t c = 0; c < 4; ++c) CHECK(e.matrix(row, c) == it->second[c]);
    ++row;
  }
  CHECK(row == 11);
  for (std::size_t r = row; r < 16; ++r) CHECK(e.matrix.row(r).isZero());
  std::size_t masked = 0;
  for (bool m : e.mask) masked += m;
  CHECK(masked == row);
}
