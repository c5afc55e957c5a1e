#include "stmtcls/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "stmtcls/text_util.hpp"

namespace stmtcls {

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted, std::size_t classes,
                          std::vector<std::string> names) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("label sequences differ in length");
  if (!names.empty() && names.size() != classes) throw std::invalid_argument("class name count differs from K");
  ConfusionMatrix cm;
  cm.counts = CountMatrix::Zero(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(classes));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || predicted[i] < 0 || static_cast<std::size_t>(truth[i]) >= classes ||
        static_cast<std::size_t>(predicted[i]) >= classes)
      throw std::invalid_argument("label out of range at position " + std::to_string(i));
    ++cm.counts(truth[i], predicted[i]);
  }
  if (names.empty())
    for (std::size_t k = 0; k < classes; ++k) names.push_back(std::to_string(k));
  cm.classes = std::move(names);
  return cm;
}

Eigen::MatrixXd row_normalize(const ConfusionMatrix& cm) {
  Eigen::MatrixXd m = cm.counts.cast<double>();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double s = m.row(r).sum();
    if (s > 0) m.row(r) /= s;
  }
  return m;
}

double micro_f1(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw std::invalid_argument("empty evaluation");
  return static_cast<double>(cm.counts.trace()) / static_cast<double>(total);
}

std::vector<ClassScores> per_class_prf(const ConfusionMatrix& cm) {
  std::vector<ClassScores> out(cm.size());
  for (Eigen::Index k = 0; k < cm.counts.rows(); ++k) {
    const auto tp = static_cast<double>(cm.counts(k, k));
    const auto predicted = static_cast<double>(cm.counts.col(k).sum());
    const auto actual = cm.counts.row(k).sum();
    auto& s = out[static_cast<std::size_t>(k)];
    s.support = actual;
    s.precision = predicted > 0 ? tp / predicted : 0.0;
    s.recall = actual > 0 ? tp / static_cast<double>(actual) : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  }
  return out;
}

NestProposal propose_nests(const Eigen::MatrixXd& normalized, double threshold) {
  if (normalized.rows() != normalized.cols()) throw std::invalid_argument("confusion matrix must be square");
  const auto k = static_cast<std::size_t>(normalized.rows());
  // Merging the heaviest cross-group pair first is Kruskal order over all
  // pairs: sort once, skip pairs already joined.
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double mass = std::max(normalized(i, j), normalized(j, i));
      if (mass >= threshold) pairs.emplace_back(mass, i, j);
    }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });

  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  NestProposal p;
  for (const auto& [mass, i, j] : pairs) {
    auto a = find(i), b = find(j);
    if (a == b) continue;
    parent[std::max(a, b)] = std::min(a, b);
    p.trace.push_back({i, j, mass});
  }
  std::vector<std::vector<std::size_t>> by_root(k);
  for (std::size_t i = 0; i < k; ++i) by_root[find(i)].push_back(i);
  for (auto& g : by_root)
    if (!g.empty()) p.groups.push_back(std::move(g));
  std::sort(p.groups.begin(), p.groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return p;
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
  std::string out = "true\\predicted";
  for (const auto& c : cm.classes) out += "," + c;
  out += "\n";
  for (Eigen::Index r = 0; r < cm.counts.rows(); ++r) {
    out += cm.classes[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < cm.counts.cols(); ++c) out += "," + std::to_string(cm.counts(r, c));
    out += "\n";
  }
  return out;
}

ConfusionMatrix confusion_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty confusion matrix file");
  auto header = split_csv(line);
  if (header.size() < 2) throw std::invalid_argument("confusion header has no classes");
  ConfusionMatrix cm;
  cm.classes.assign(header.begin() + 1, header.end());
  const auto k = static_cast<Eigen::Index>(cm.classes.size());
  cm.counts = CountMatrix::Zero(k, k);
  Eigen::Index r = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (r >= k) throw std::invalid_argument("more rows than classes");
    if (static_cast<Eigen::Index>(cells.size()) != k + 1)
      throw std::invalid_argument("row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) + " cells");
    if (cells[0] != cm.classes[static_cast<std::size_t>(r)])
      throw std::invalid_argument("row " + std::to_string(r + 1) + " class '" + cells[0] + "' out of order");
    for (Eigen::Index c = 0; c < k; ++c) {
      try {
        cm.counts(r, c) = std::stoll(cells[static_cast<std::size_t>(c + 1)]);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad count '" + cells[static_cast<std::size_t>(c + 1)] + "'");
      }
      if (cm.counts(r, c) < 0) throw std::invalid_argument("negative count");
    }
    ++r;
  }
  if (r != k) throw std::invalid_argument("fewer rows than classes");
  return cm;
}

std::string format_report(const ConfusionMatrix& cm) {
  std::ostringstream out;
  out << "micro_f1 " << fmt(micro_f1(cm)) << "\n";
  out << "class precision recall f1 support\n";
  const auto scores = per_class_prf(cm);
  for (std::size_t k = 0; k < scores.size(); ++k)
    out << cm.classes[k] << " " << fmt(scores[k].precision) << " " << fmt(scores[k].recall) << " "
        << fmt(scores[k].f1) << " " << scores[k].support << "\n";
  return out.str();
}

ParsedReport parse_report(std::string_view text) {
  ParsedReport rep;
  std::istringstream in{std::string(text)};
  std::string line;
  bool seen_f1 = false, seen_header = false;
  while (std::getline(in, line)) {
    auto f = split_ws(line);
    if (f.empty()) continue;
    if (!seen_f1) {
      if (f.size() != 2 || f[0] != "micro_f1") throw std::invalid_argument("report must start with micro_f1");
      rep.micro_f1 = std::stod(f[1]);
      seen_f1 = true;
    } else if (!seen_header) {
      if (f.size() != 5 || f[0] != "class") throw std::invalid_argument("missing per-class header");
      seen_header = true;
    } else {
      if (f.size() != 5) throw std::invalid_argument("bad per-class row: " + line);
      rep.classes.push_back(f[0]);
      rep.scores.push_back({std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), std::stoll(f[4])});
    }
  }
  if (!seen_header) throw std::invalid_argument("incomplete report");
  return rep;
}

std::string heatmap_svg(const ConfusionMatrix& cm) {
  const auto m = row_normalize(cm);
  const int k = static_cast<int>(cm.size());
  const int cell = 24, margin = 120;
  const int side = margin + k * cell + 10;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\"" << side
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int r = 0; r < k; ++r) {
    const int y = margin + r * cell;
    out << "<text x=\"" << margin - 4 << "\" y=\"" << y + cell / 2 + 3 << "\" text-anchor=\"end\">"
        << xml_escape(cm.classes[static_cast<std::size_t>(r)]) << "</text>\n";
    for (int c = 0; c < k; ++c) {
      const double v = m(r, c);
      const int shade = static_cast<int>(255 - 255 * v + 0.5);
      out << "<rect x=\"" << margin + c * cell << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"rgb(" << shade << "," << shade << ",255)\"><title>" << fmt(v, "%.3f") << "</title></rect>\n";
    }
  }
  for (int c = 0; c < k; ++c) {
    const int x = margin + c * cell + cell / 2;
    out << "<text transform=\"translate(" << x + 3 << "," << margin - 4 << ") rotate(-60)\">"
        << xml_escape(cm.classes[static_cast<std::size_t>(c)]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace stmtcls
