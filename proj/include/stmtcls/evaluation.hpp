#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace stmtcls {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  CountMatrix counts;

  std::size_t size() const { return static_cast<std::size_t>(counts.rows()); }
  std::int64_t total() const { return counts.sum(); }
};

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted, std::size_t classes,
                          std::vector<std::string> names = {});

/// Nonzero rows scaled to sum to 1, zero rows left at zero.
Eigen::MatrixXd row_normalize(const ConfusionMatrix& cm);

/// trace / total; throws on an empty evaluation.
double micro_f1(const ConfusionMatrix& cm);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

std::vector<ClassScores> per_class_prf(const ConfusionMatrix& cm);

struct Merge {
  std::size_t i = 0;
  std::size_t j = 0;
  double mass = 0.0;
};

struct NestProposal {
  /// Disjoint groups covering every class, members ascending, groups ordered
  /// by their smallest member.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<Merge> trace;
};

/// Greedy agglomeration on symmetric confusion mass max(C[i][j], C[j][i]):
/// the heaviest remaining cross-group pair is merged while its mass reaches
/// the threshold.
NestProposal propose_nests(const Eigen::MatrixXd& normalized, double threshold = 0.25);

/// Delimited text: header `true\predicted,<names...>`, then one row per true class.
std::string confusion_to_csv(const ConfusionMatrix& cm);
ConfusionMatrix confusion_from_csv(std::string_view text);

/// Plain-text report: a `micro_f1 <value>` line, then a per-class table.
std::string format_report(const ConfusionMatrix& cm);

struct ParsedReport {
  double micro_f1 = 0.0;
  std::vector<std::string> classes;
  std::vector<ClassScores> scores;
};

ParsedReport parse_report(std::string_view text);

/// Heatmap of the row-normalized matrix as a standalone SVG document.
std::string heatmap_svg(const ConfusionMatrix& cm);

}  // namespace stmtcls
