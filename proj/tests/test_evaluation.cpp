#include <doctest.h>

#include "stmtcls/evaluation.hpp"

using namespace stmtcls;

TEST_CASE("confusion counts") {
  auto cm = confusion({0, 1, 2, 2}, {0, 1, 2, 2}, 3);
  CHECK(cm.counts(2, 2) == 2);
  CHECK(cm.counts.sum() == cm.counts.trace());
  auto col = confusion({0, 1, 2}, {0, 0, 0}, 3);
  CHECK(col.counts.col(0).sum() == 3);
  CHECK(col.counts.rightCols(2).sum() == 0);
  CHECK_THROWS_AS(confusion({0}, {0, 1}, 2), std::invalid_argument);
}

TEST_CASE("confusion matches a hand tally of 20 pairs") {
  const std::vector<int> t = {0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2};
  const std::vector<int> p = {0, 0, 0, 0, 0, 1, 2, 1, 1, 1, 1, 0, 0, 2, 2, 2, 2, 2, 1, 0};
  auto cm = confusion(t, p, 3, {"x", "y", "z"});
  CountMatrix expected(3, 3);
  expected << 5, 1, 1,
              2, 4, 0,
              1, 1, 5;
  CHECK(cm.counts == expected);
  CHECK(micro_f1(cm) == doctest::Approx(14.0 / 20));
}

TEST_CASE("row normalization") {
  auto diag = confusion({0, 1, 2}, {0, 1, 2}, 3);
  CHECK(row_normalize(diag).isIdentity());
  ConfusionMatrix one{{"a", "b"}, CountMatrix(2, 2)};
  one.counts << 5, 5, 0, 0;
  auto n = row_normalize(one);
  CHECK(n(0, 0) == 0.5);
  CHECK(n(0, 1) == 0.5);
  CHECK(n.row(1).isZero());
}

TEST_CASE("micro F1 and per-class scores") {
  auto perfect = confusion({0, 1, 1}, {0, 1, 1}, 2);
  CHECK(micro_f1(perfect) == 1.0);
  for (const auto& s : per_class_prf(perfect)) CHECK(s.f1 == 1.0);
  auto never = confusion({0, 1, 1}, {0, 0, 0}, 2);
  CHECK(per_class_prf(never)[1].precision == 0.0);
  CHECK(per_class_prf(never)[1].f1 == 0.0);
  ConfusionMatrix empty{{"a"}, CountMatrix::Zero(1, 1)};
  CHECK_THROWS(micro_f1(empty));
}

TEST_CASE("constant classifier micro F1 equals majority share") {
  std::vector<int> t, p;
  for (int i = 0; i < 100; ++i) {
    t.push_back(i < 39 ? 2 : i % 2);
    p.push_back(2);
  }
  CHECK(micro_f1(confusion(t, p, 3)) == doctest::Approx(0.39));
}

TEST_CASE("nest proposal basics") {
  auto id = propose_nests(Eigen::MatrixXd::Identity(4, 4));
  CHECK(id.groups.size() == 4);
  CHECK(id.trace.empty());

  // lemma -> theorem 0.6 dominates
  Eigen::MatrixXd m(3, 3);
  m << 0.4, 0.6, 0.0,
       0.3, 0.7, 0.0,
       0.0, 0.26, 0.74;
  auto p = propose_nests(m, 0.25);
  REQUIRE(p.trace.size() == 2);
  CHECK(p.trace[0].i == 0);
  CHECK(p.trace[0].j == 1);
  CHECK(p.trace[0].mass == doctest::Approx(0.6));
  CHECK(p.groups.size() == 1);
  CHECK(propose_nests(m, 1.1).groups.size() == 3);
}

TEST_CASE("nest proposal is monotone in threshold") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(8, 8).cwiseAbs();
  std::size_t prev = 0;
  for (double th : {0.9, 0.7, 0.5, 0.3, 0.1}) {
    auto p = propose_nests(m, th);
    std::size_t covered = 0;
    for (const auto& g : p.groups) covered += g.size();
    CHECK(covered == 8);
    CHECK((prev == 0 || p.groups.size() <= prev));
    prev = p.groups.size();
  }
}

TEST_CASE("csv and report round trip") {
  auto cm = confusion({0, 1, 2, 2, 1}, {0, 2, 2, 1, 1}, 3, {"abstract", "proof", "remark"});
  auto csv = confusion_to_csv(cm);
  CHECK(csv.rfind("true\\predicted,abstract,proof,remark\n", 0) == 0);
  auto back = confusion_from_csv(csv);
  CHECK(back.classes == cm.classes);
  CHECK(back.counts == cm.counts);
  CHECK_THROWS(confusion_from_csv("true\\predicted,a,b\na,1\n"));

  auto rep = parse_report(format_report(cm));
  CHECK(rep.micro_f1 == doctest::Approx(micro_f1(cm)).epsilon(1e-6));
  CHECK(rep.classes == cm.classes);
  CHECK(rep.scores[1].support == 2);
}

TEST_CASE("heatmap is an svg with one cell per entry") {
  auto cm = confusion({0, 1}, {0, 1}, 2, {"a<b", "c"});
  auto svg = heatmap_svg(cm);
  CHECK(svg.rfind("<svg", 0) == 0);
  std::size_t rects = 0;
  for (std::size_t pos = 0; (pos = svg.find("<rect", pos)) != std::string::npos; ++pos) ++rects;
  CHECK(rects == 4);
  CHECK(svg.find("a&lt;b") != std::string::npos);
}
