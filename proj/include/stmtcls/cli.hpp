#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "stmtcls/classifiers.hpp"
#include "stmtcls/dataset.hpp"
#include "stmtcls/embeddings.hpp"

namespace stmtcls {

/// In-task files of a dataset split three ways, labels as nest indices.
struct NestSplits {
  NestView view;
  std::vector<NestEntry> train, validation, test;
};

NestSplits prepare_splits(const std::filesystem::path& dataset, const Taxonomy& taxonomy, double ratio = 0.8,
                          double validation_fraction = 0.05);

struct LabeledSequences {
  std::vector<IndexSequence> seqs;
  std::vector<int> labels;
};

LabeledSequences load_sequences(const std::filesystem::path& dataset, const std::vector<NestEntry>& entries,
                                const Vocabulary& vocab, std::size_t window);

/// Writes train.lst/test.lst, and with a vocabulary also train.idx/test.idx,
/// vocab.txt, labels.txt and EXPORT into `out`.
void emit_lists(const std::filesystem::path& dataset, const std::filesystem::path& out, const Taxonomy& taxonomy,
                const Split& split, const Vocabulary* vocab, std::size_t window, double ratio);

/// Entry point of the command-line tool. Returns the process exit status:
/// 0 success, 1 runtime failure, 2 usage error.
int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stmtcls
