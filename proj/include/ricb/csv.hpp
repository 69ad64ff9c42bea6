#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ricb::csv {

// RFC 4180 style: fields containing comma, quote, CR or LF are quoted and
// embedded quotes doubled.
std::string escape(std::string_view field);
void write_row(std::ostream& os, const std::vector<std::string>& fields);

// Reads one logical record (quoted fields may span lines). Returns nullopt at
// end of input. Throws Error(ManifestDesync) on an unterminated quote.
std::optional<std::vector<std::string>> read_row(std::istream& is);

}  // namespace ricb::csv
