#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfm {

/// Rows of real samples read from CSV. A first row containing any non-numeric field is a header.
/// Blank lines and lines starting with '#' are skipped; every data row must have the same width.
std::vector<std::vector<double>> read_samples_csv(std::istream& in);
std::vector<std::vector<double>> read_samples_csv_file(const std::string& path);

void write_samples_csv(std::ostream& out, const std::vector<std::vector<double>>& rows,
                       const std::vector<std::string>& header = {});

}  // namespace cfm
