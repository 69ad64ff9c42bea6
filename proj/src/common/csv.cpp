#include "ricb/csv.hpp"

#include "ricb/error.hpp"

namespace ricb::csv {

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) os << ',';
    os << escape(fields[i]);
  }
  os << '\n';
}

std::optional<std::vector<std::string>> read_row(std::istream& is) {
  if (is.peek() == std::char_traits<char>::eof()) return std::nullopt;

  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;
  char c;
  while (is.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_started_quoted = false;
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return fields;
    } else if (c == '\r') {
      if (is.peek() == '\n') is.get(c);
      fields.push_back(std::move(field));
      return fields;
    } else {
      field += c;
    }
  }
  if (quoted) throw Error(ErrorCode::ManifestDesync, "unterminated quoted CSV field");
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace ricb::csv
