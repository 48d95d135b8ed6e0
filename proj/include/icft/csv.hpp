#ifndef ICFT_CSV_HPP
#define ICFT_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace icft::csv {

// RFC-4180 reader/writer. Records may span lines inside quoted fields.
std::vector<std::vector<std::string>> read(std::istream& in);
void write_row(std::ostream& out, const std::vector<std::string>& row);

std::string quote_if_needed(const std::string& field);

}  // namespace icft::csv

#endif
