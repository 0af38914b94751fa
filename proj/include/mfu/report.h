/*==============================================================================
 *     File: report.h
 *
 *  Description: Tabular experiment output. CSV is the canonical form
 *               (metadata as leading '# key: value' lines), Markdown is for
 *               reading.
 *
 *============================================================================*/

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mfu/types.h"

namespace mfu {

struct ExperimentReport {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    ExperimentReport() = default;
    ExperimentReport(std::string id, std::vector<std::string> cols);

    void addRow(std::vector<std::string> row);
    void addMeta(const std::string& key, const std::string& value);

    Index columnIndex(const std::string& name) const;
    std::vector<std::string> column(const std::string& name) const;
    std::vector<double> numericColumn(const std::string& name) const;

    std::string toCsv() const;
    std::string toMarkdown() const;
    static ExperimentReport fromCsv(const std::string& text);
};

/// Timing columns end in "seconds".
bool isTimingColumn(const std::string& name);

/// Same experiment, columns and non-timing cells.
bool sameNonTiming(const ExperimentReport& a, const ExperimentReport& b);

/// %.6e, with nan/inf spelled out.
std::string fmtSci(double x);
std::string fmtInt(long long x);
std::string fmtBool(bool b);

}  // namespace mfu
