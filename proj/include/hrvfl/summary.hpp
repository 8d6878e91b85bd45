#pragma once

#include <span>
#include <string>
#include <vector>

#include "hrvfl/experiment.hpp"

namespace hrvfl {

struct ModelSummary {
  std::string model;
  double avg_accuracy = 0;
  double avg_std = 0;
  double avg_rank = 0;
  std::size_t cells = 0;
};

/// Best row of one model in one (dataset, noise rate) cell.
struct SummaryCell {
  std::string dataset;
  double noise_rate = 0;
  std::string model;
  double mean = 0;
  double std = 0;
  double rank = 0;
};

struct Summary {
  std::vector<SummaryCell> cells;
  std::vector<ModelSummary> models;
};

/// Per-model averages of accuracy and std over (dataset, noise rate) cells and
/// the average rank (1 = best, ties share the mean of their ranks). In each
/// cell a model is represented by its selected row, or its best row if none is
/// selected. Error rows are ignored.
Summary summarize(std::span<const ResultRow> rows);

/// Plain-text table: one line per (dataset, noise rate), "acc±std" in percent
/// per model, then the average and average-rank lines.
std::string render_table(const Summary& summary);

}  // namespace hrvfl
