#ifndef ZAKAI_CSV_HPP
#define ZAKAI_CSV_HPP

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace zakai {

/// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace zakai

#endif
