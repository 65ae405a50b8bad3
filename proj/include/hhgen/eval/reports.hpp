#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "hhgen/eval/alignment.hpp"
#include "hhgen/eval/hourly.hpp"
#include "hhgen/eval/intervention.hpp"
#include "hhgen/eval/mediation.hpp"
#include "hhgen/stats/pca.hpp"

namespace hhgen::eval {

/// Fixed-width plain-text table; the first row is the header.
inline std::string text_table(const std::vector<csv::Row>& rows) {
  if (rows.empty()) return {};
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream os;
  auto line = [&](const csv::Row& r) {
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < r.size() ? r[c] : "";
      os << (c ? "  " : "") << cell << std::string(width[c] - cell.size(), ' ');
    }
    os << '\n';
  };
  line(rows.front());
  std::size_t total = 0;
  for (auto w : width) total += w;
  os << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (std::size_t i = 1; i < rows.size(); ++i) line(rows[i]);
  return os.str();
}

inline std::string semantic_alignment_table(const SemanticAlignment& a) {
  auto cell = [](const MeanSd& m) { return fmt_fixed(m.mean, 2) + " +/- " + fmt_fixed(m.sd, 2); };
  return text_table({{"pair", "cosine", "n"},
                     {"Persona-Environment", cell(a.persona_env), std::to_string(a.n)},
                     {"Environment-Behavior", cell(a.env_behavior), std::to_string(a.n)},
                     {"Persona-Behavior", cell(a.persona_behavior), std::to_string(a.n)}});
}

inline std::string mediation_csv(const MediationReport& r) {
  return csv::write({{"n", "clusters", "mi_pe", "mi_eb", "mi_pb", "m_score", "d_score", "validated", "strength"},
                     {std::to_string(r.n), std::to_string(r.clusters), fmt_fixed(r.mi_pe, 6), fmt_fixed(r.mi_eb, 6),
                      fmt_fixed(r.mi_pb, 6), fmt_fixed(r.m_score, 6), fmt_fixed(r.d_score, 6),
                      r.validated ? "true" : "false", fmt_fixed(r.strength, 6)}});
}

inline std::string mediation_table(const MediationReport& r) { return text_table(csv::parse(mediation_csv(r))); }

inline std::string intervention_table(const InterventionReport& r) { return text_table(csv::parse(intervention_csv(r))); }

inline std::string alignment_table(const DatasetAlignment& r) { return text_table(csv::parse(alignment_csv(r))); }

inline std::string iterative_table(const std::vector<IterationRow>& rows) { return text_table(csv::parse(iterative_csv(rows))); }

/// Two-dimensional PCA coordinates per row, for external plotting.
inline std::string coordinates_2d_csv(const stats::Matrix& x, const std::vector<std::string>& ids,
                                      const std::vector<std::string>& groups = {}) {
  if (static_cast<std::size_t>(x.rows()) != ids.size() || (!groups.empty() && groups.size() != ids.size()))
    fail(ErrorCode::length_mismatch, "coordinate export needs one id per row");
  const stats::Matrix xy = stats::pca_reduce(x, 2);
  std::vector<csv::Row> rows = {{"id", "group", "x", "y"}};
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double px = xy.cols() > 0 ? xy(i, 0) : 0.0, py = xy.cols() > 1 ? xy(i, 1) : 0.0;
    rows.push_back({ids[static_cast<std::size_t>(i)], groups.empty() ? "" : groups[static_cast<std::size_t>(i)],
                    fmt_fixed(px, 6), fmt_fixed(py, 6)});
  }
  return csv::write(rows);
}

}  // namespace hhgen::eval
