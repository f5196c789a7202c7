#include "roller/csv.hpp"

#include <cstdio>
#include <sstream>

#include "roller/errors.hpp"

namespace roller {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {}

void CsvWriter::header(const std::string& line) { out_ << line << "\n"; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << "\n";
}

void CsvWriter::close() { out_.close(); }

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open CSV file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

double parse_double(const std::string& cell, const std::string& context) {
  try {
    size_t pos = 0;
    double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw DomainError(context + ": trailing characters in '" + cell + "'");
    return v;
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError(context + ": cannot parse '" + cell + "' as a number");
  }
}

}  // namespace roller
