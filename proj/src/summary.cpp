#include "hrvfl/summary.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "hrvfl/error.hpp"

namespace hrvfl {

namespace {

bool better(const ResultRow& a, const ResultRow& b) {
  if (a.mean != b.mean) return a.mean > b.mean;
  if (a.params.C != b.params.C) return a.params.C < b.params.C;
  return a.params.hloss.lambda < b.params.hloss.lambda;
}

std::string percent(double mean, double std) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f±%.2f", 100.0 * mean, 100.0 * std);
  return buf;
}

}  // namespace

Summary summarize(std::span<const ResultRow> rows) {
  using Cell = std::tuple<std::string, double>;
  // (dataset, rate) -> model -> representative row
  std::map<Cell, std::map<std::string, const ResultRow*>> cells;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    auto& slot = cells[{r.dataset, r.noise_rate}][r.model];
    if (slot == nullptr || (r.selected && !slot->selected) || (r.selected == slot->selected && better(r, *slot)))
      slot = &r;
  }
  if (cells.empty()) throw ConfigError("summarize: no successful result rows");

  Summary out;
  std::map<std::string, ModelSummary> per_model;
  for (const auto& [cell, models] : cells) {
    std::vector<std::pair<std::string, const ResultRow*>> ordered(models.begin(), models.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.second->mean > b.second->mean; });
    for (std::size_t i = 0; i < ordered.size();) {
      std::size_t j = i;
      while (j < ordered.size() && ordered[j].second->mean == ordered[i].second->mean) ++j;
      // positions i..j-1 tie; each gets the mean of ranks i+1..j
      const double rank = 0.5 * static_cast<double>(i + 1 + j);
      for (std::size_t t = i; t < j; ++t) {
        const ResultRow& r = *ordered[t].second;
        out.cells.push_back({std::get<0>(cell), std::get<1>(cell), r.model, r.mean, r.std, rank});
        auto& s = per_model[r.model];
        s.model = r.model;
        s.avg_accuracy += r.mean;
        s.avg_std += r.std;
        s.avg_rank += rank;
        ++s.cells;
      }
      i = j;
    }
  }
  for (auto& [name, s] : per_model) {
    const auto n = static_cast<double>(s.cells);
    s.avg_accuracy /= n;
    s.avg_std /= n;
    s.avg_rank /= n;
    out.models.push_back(s);
  }
  std::sort(out.cells.begin(), out.cells.end(), [](const SummaryCell& a, const SummaryCell& b) {
    return std::tie(a.dataset, a.noise_rate, a.model) < std::tie(b.dataset, b.noise_rate, b.model);
  });
  return out;
}

std::string render_table(const Summary& summary) {
  std::vector<std::string> models;
  for (const auto& m : summary.models) models.push_back(m.model);

  std::string text;
  char buf[96];
  auto cell = [&](const std::string& s) {
    std::snprintf(buf, sizeof buf, " %16s", s.c_str());
    text += buf;
  };
  std::snprintf(buf, sizeof buf, "%-24s %6s", "dataset", "noise");
  text += buf;
  for (const auto& m : models) cell(m);
  text += '\n';

  std::map<std::tuple<std::string, double>, std::map<std::string, const SummaryCell*>> grid;
  for (const auto& c : summary.cells) grid[{c.dataset, c.noise_rate}][c.model] = &c;
  for (const auto& [key, by_model] : grid) {
    std::snprintf(buf, sizeof buf, "%-24s %5.0f%%", std::get<0>(key).c_str(), 100.0 * std::get<1>(key));
    text += buf;
    for (const auto& m : models) {
      const auto it = by_model.find(m);
      cell(it == by_model.end() ? "-" : percent(it->second->mean, it->second->std));
    }
    text += '\n';
  }

  std::snprintf(buf, sizeof buf, "%-31s", "Avg. Acc.±Avg. Std.");
  text += buf;
  for (const auto& m : summary.models) cell(percent(m.avg_accuracy, m.avg_std));
  text += '\n';
  std::snprintf(buf, sizeof buf, "%-31s", "Avg. Rank");
  text += buf;
  for (const auto& m : summary.models) {
    char r[32];
    std::snprintf(r, sizeof r, "%.2f", m.avg_rank);
    cell(r);
  }
  text += '\n';
  return text;
}

}  // namespace hrvfl
