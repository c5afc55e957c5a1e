#include <doctest.h>

#include <fstream>
#include <set>

#include "stmtcls/dataset.hpp"
#include "stmtcls/math_lexer.hpp"
#include "stmtcls/sha256.hpp"
#include "stmtcls/text_util.hpp"
#include "support.hpp"

using namespace stmtcls;
namespace fs = std::filesystem;

namespace {
const Taxonomy& taxonomy() {
  static const Taxonomy t = Taxonomy::load(default_taxonomy_path());
  return t;
}

// "<sha256>  <relative path>" for every regular file, sorted by path
std::string tree_listing(const fs::path& root) {
  std::vector<std::string> rels;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) rels.push_back(fs::relative(e.path(), root).generic_string());
  std::sort(rels.begin(), rels.end());
  std::string out;
  for (const auto& r : rels) out += sha256_hex(read_text_file(root / r)) + "  " + r + "\n";
  return out;
}

std::vector<DatasetFile> fake_files(std::size_t n) {
  std::vector<DatasetFile> files;
  for (std::size_t i = 0; i < n; ++i) files.push_back({"lemma", sha256_hex("paragraph " + std::to_string(i))});
  return files;
}
}  // namespace

TEST_CASE("sha256 known vector") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("writer deduplicates within a label and reports cross-label collisions") {
  TempDir tmp("writer");
  DatasetWriter w(tmp.path);
  auto a = w.write_serialized("same text\n", "lemma");
  auto b = w.write_serialized("same text\n", "lemma");
  CHECK(a == b);
  CHECK(w.duplicates() == 1);
  auto c = w.write_serialized("other text\n", "lemma");
  CHECK(c != a);
  w.write_serialized("same text\n", "theorem");
  auto coll = w.collisions();
  REQUIRE(coll.size() == 1);
  CHECK(coll[0].hash == sha256_hex("same text\n"));
  CHECK(coll[0].labels == std::vector<std::string>{"lemma", "theorem"});
  CHECK(a == tmp.path / "lemma" / (sha256_hex("same text\n") + ".txt"));
  CHECK(read_text_file(a) == "same text\n");
  CHECK(list_dataset(tmp.path).size() == 3);
  CHECK(w.label_counts().at("lemma") == 2);
}

TEST_CASE("split by first hash byte") {
  auto files = fake_files(2000);
  auto s = split_train_test(files, 0.8);
  CHECK(s.train.size() + s.test.size() == files.size());
  for (const auto& f : s.train) CHECK(std::stoi(f.hash.substr(0, 2), nullptr, 16) < 205);
  for (const auto& f : s.test) CHECK(std::stoi(f.hash.substr(0, 2), nullptr, 16) >= 205);
  CHECK(split_train_test(files, 1.0).test.empty());
  CHECK_THROWS_AS(split_train_test(files, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(split_train_test(files, 1.5), std::invalid_argument);
  auto again = split_train_test(files, 0.8);
  CHECK(again.train.size() == s.train.size());
}

TEST_CASE("validation carve uses the second hash byte") {
  auto train = split_train_test(fake_files(4000), 0.8).train;
  auto v = carve_validation(train, 0.05);
  CHECK(v.train.size() + v.test.size() == train.size());
  for (const auto& f : v.test) CHECK(std::stoi(f.hash.substr(2, 2), nullptr, 16) < 13);
  const double frac = static_cast<double>(v.test.size()) / static_cast<double>(train.size());
  CHECK(frac > 0.03);
  CHECK(frac < 0.07);
}

TEST_CASE("stats arithmetic") {
  auto s = compute_stats(std::vector<std::size_t>{37, 59, 81});
  CHECK(s.median_words == doctest::Approx(59));
  CHECK(s.mean_words == doctest::Approx(59));
  CHECK(s.coverage == doctest::Approx(1.0));
  auto t = compute_stats(std::vector<std::size_t>{10, 500, 20, 600}, 480);
  CHECK(t.median_words == doctest::Approx(260));
  CHECK(t.coverage == doctest::Approx(0.5));
  CHECK_THROWS_AS(compute_stats(std::vector<std::size_t>{}), DatasetError);
}

TEST_CASE("nest regrouping") {
  std::vector<DatasetFile> lemmas = {{"lemma", sha256_hex("1")}, {"lemma", sha256_hex("2")}};
  auto v = regroup_to_nests(lemmas, taxonomy());
  REQUIRE(v.entries.size() == 2);
  CHECK(v.entries[0].nest == "proposition");
  CHECK(v.counts.at("proposition") == 2);
  CHECK(v.retained_fraction == doctest::Approx(1.0));

  auto hints = regroup_to_nests({{"hint", sha256_hex("3")}}, taxonomy());
  CHECK(hints.entries.empty());
  CHECK_FALSE(hints.warnings.empty());

  // conservation: one file per label
  std::vector<DatasetFile> all;
  for (const auto& l : taxonomy().labels()) all.push_back({l.name, sha256_hex(l.name)});
  auto view = regroup_to_nests(all, taxonomy());
  CHECK(view.entries.size() == 25);
  for (const auto& n : taxonomy().nests()) CHECK(view.counts.at(n.name) == n.members.size());
}

TEST_CASE("manifest round trip") {
  DatasetManifest m;
  m.labels = {{"lemma", 3, "lemma"}, {"theorem", 1, "theorem"}};
  m.mode = ExtractionMode::NoMath;
  m.documents = 4;
  m.failed_documents = 1;
  m.collisions = 2;
  m.stats = {4, 12.5, 11.0, 0.75, 480};
  m.skips = {{"parse-error", 1}};
  auto text = m.serialize();
  auto back = DatasetManifest::parse(text);
  CHECK(back.serialize() == text);
  CHECK(back.paragraphs() == 4);
  CHECK(back.mode == ExtractionMode::NoMath);
  CHECK_THROWS_AS(DatasetManifest::parse("format=2\n"), DatasetError);
}

TEST_CASE("fixture corpus extraction matches the golden tree and is repeatable") {
  TempDir a("extract-a"), b("extract-b");
  ExtractOptions opt;
  opt.overwrite = true;
  opt.jobs = 3;
  auto m1 = extract_corpus(fixtures_dir() / "corpus", a.path, taxonomy(), opt);
  opt.jobs = 1;
  auto m2 = extract_corpus(fixtures_dir() / "corpus", b.path, taxonomy(), opt);
  CHECK(m1.serialize() == m2.serialize());
  const auto listing = tree_listing(a.path);
  CHECK(listing == tree_listing(b.path));
  CHECK(listing == read_text_file(fixtures_dir() / "golden" / "with-math.sha256"));
  CHECK(m1.documents == 10);
  CHECK(m1.failed_documents == 1);
  CHECK(m1.collisions == 1);
  CHECK(m1.skips.at("dropped-non-english") == 1);
  CHECK(m1.skips.at("dropped-error-markup") == 2);
  CHECK(m1.skips.at("dropped-long-word") == 1);

  // manifest counts equal files on disk
  auto files = list_dataset(a.path);
  CHECK(files.size() == m1.paragraphs());
}

TEST_CASE("extraction refuses a non-empty output directory") {
  TempDir out("nonempty");
  write_text_file(out.path / "keep.txt", "x");
  CHECK_THROWS_AS(extract_corpus(fixtures_dir() / "corpus", out.path, taxonomy()), DatasetError);
  CHECK(fs::exists(out.path / "keep.txt"));
}

TEST_CASE("empty input gives an empty manifest") {
  TempDir in("empty-in"), out("empty-out");
  auto m = extract_corpus(in.path, out.path / "ds", taxonomy());
  CHECK(m.documents == 0);
  CHECK(m.paragraphs() == 0);
  CHECK(fs::exists(out.path / "ds" / "MANIFEST"));
}

TEST_CASE("no-math extraction has no math lexemes and fewer words") {
  TempDir with("with"), without("without");
  ExtractOptions opt;
  auto mw = extract_corpus(fixtures_dir() / "corpus", with.path, taxonomy(), opt);
  opt.mode = ExtractionMode::NoMath;
  auto mn = extract_corpus(fixtures_dir() / "corpus", without.path, taxonomy(), opt);
  CHECK(mn.mode == ExtractionMode::NoMath);
  for (const auto& f : list_dataset(without.path))
    for (const auto& tok : split_ws(read_text_file(without.path / f.relative()))) CHECK_FALSE(math::is_math_lexeme(tok));
  CHECK(mn.stats.mean_words < mw.stats.mean_words);
  CHECK(mn.stats.median_words < mw.stats.median_words);
}

TEST_CASE("archives and gzip files are read") {
  TempDir in("archive-in"), out("archive-out");
  // tar holding two documents, built by the system tar/gzip
  const auto src = fixtures_dir() / "corpus";
  const std::string cmd = "tar -czf '" + (in.path / "bundle.tar.gz").string() + "' -C '" + src.string() +
                          "' doc01_remark.html doc02_nested.html && gzip -c '" + (src / "doc07_sections.html").string() +
                          "' > '" + (in.path / "single.html.gz").string() + "'";
  REQUIRE(std::system(cmd.c_str()) == 0);
  auto m = extract_corpus(in.path, out.path / "ds", taxonomy());
  CHECK(m.documents == 3);
  CHECK(m.failed_documents == 0);
  CHECK(m.paragraphs() >= 8);
}
