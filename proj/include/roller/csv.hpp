#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace roller {

// Deterministic double formatting for every CSV the project emits. Two runs
// of the same scenario must produce byte-identical files, so all numeric
// output funnels through here.
std::string format_double(double value);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  bool ok() const { return static_cast<bool>(out_); }
  void header(const std::string& line);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Reads a whole CSV file. Throws DomainError on unreadable files; cell counts
// are not enforced here, callers check shape against their schema.
CsvTable read_csv(const std::string& path);

double parse_double(const std::string& cell, const std::string& context);

}  // namespace roller
