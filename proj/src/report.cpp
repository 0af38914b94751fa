#include "mfu/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mfu {

namespace {

std::string csvCell(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> splitCsvLine(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); i++) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                i++;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw FormatError("csv: unterminated quote");
    cells.push_back(cur);
    return cells;
}

}  // namespace

ExperimentReport::ExperimentReport(std::string id, std::vector<std::string> cols)
    : experiment(std::move(id)), columns(std::move(cols))
{
}

void ExperimentReport::addRow(std::vector<std::string> row)
{
    if (row.size() != columns.size())
        throw DimensionError("report " + experiment + ": row has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

void ExperimentReport::addMeta(const std::string& key, const std::string& value)
{
    metadata.emplace_back(key, value);
}

Index ExperimentReport::columnIndex(const std::string& name) const
{
    for (std::size_t k = 0; k < columns.size(); k++)
        if (columns[k] == name) return static_cast<Index>(k);
    throw DomainError("report " + experiment + ": no column '" + name + "'");
}

std::vector<std::string> ExperimentReport::column(const std::string& name) const
{
    const Index k = columnIndex(name);
    std::vector<std::string> out;
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
}

std::vector<double> ExperimentReport::numericColumn(const std::string& name) const
{
    std::vector<double> out;
    for (const auto& s : column(name)) out.push_back(std::strtod(s.c_str(), nullptr));
    return out;
}

std::string ExperimentReport::toCsv() const
{
    std::ostringstream os;
    os << "# experiment: " << experiment << "\n";
    for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << "\n";
    for (std::size_t k = 0; k < columns.size(); k++) os << (k ? "," : "") << csvCell(columns[k]);
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); k++) os << (k ? "," : "") << csvCell(r[k]);
        os << "\n";
    }
    return os.str();
}

std::string ExperimentReport::toMarkdown() const
{
    std::ostringstream os;
    os << "### " << experiment << "\n\n";
    for (const auto& [k, v] : metadata) os << "- " << k << ": " << v << "\n";
    if (!metadata.empty()) os << "\n";
    os << "|";
    for (const auto& c : columns) os << " " << c << " |";
    os << "\n|";
    for (std::size_t k = 0; k < columns.size(); k++) os << "---|";
    os << "\n";
    for (const auto& r : rows) {
        os << "|";
        for (const auto& c : r) os << " " << c << " |";
        os << "\n";
    }
    return os.str();
}

ExperimentReport ExperimentReport::fromCsv(const std::string& text)
{
    ExperimentReport rep;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) continue;
            const std::string key = line.substr(2, colon - 2);
            const std::string val = line.substr(colon + 2);
            if (key == "experiment")
                rep.experiment = val;
            else
                rep.metadata.emplace_back(key, val);
            continue;
        }
        if (!header) {
            rep.columns = splitCsvLine(line);
            header = true;
        } else {
            rep.addRow(splitCsvLine(line));
        }
    }
    if (!header) throw FormatError("csv: no header line");
    return rep;
}

bool isTimingColumn(const std::string& name)
{
    const std::string suffix = "seconds";
    return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool sameNonTiming(const ExperimentReport& a, const ExperimentReport& b)
{
    if (a.experiment != b.experiment || a.columns != b.columns || a.rows.size() != b.rows.size()) return false;
    for (std::size_t r = 0; r < a.rows.size(); r++)
        for (std::size_t k = 0; k < a.columns.size(); k++)
            if (!isTimingColumn(a.columns[k]) && a.rows[r][k] != b.rows[r][k]) return false;
    return true;
}

std::string fmtSci(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

std::string fmtInt(long long x)
{
    return std::to_string(x);
}

std::string fmtBool(bool b)
{
    return b ? "1" : "0";
}

}  // namespace mfu
