#pragma once

#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace wqt {

/// 12 significant digits, "-0" normalized to "0".
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

/// Comma-joined report rows. Plain names need no quoting; cells holding tuple
/// labels such as "(a,1)" are double-quoted.
class CsvReport {
 public:
  void row(std::initializer_list<std::string_view> cells) {
    bool first = true;
    for (auto c : cells) {
      if (!first) text_ += ',';
      append_cell(c);
      first = false;
    }
    text_ += '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      append_cell(cells[i]);
    }
    text_ += '\n';
  }
  void metric(std::string_view name, std::string_view value) { row({name, value}); }
  void metric(std::string_view name, double value) { row({name, format_number(value)}); }

  const std::string& str() const noexcept { return text_; }

 private:
  void append_cell(std::string_view c) {
    if (c.find(',') == std::string_view::npos && c.find('"') == std::string_view::npos) {
      text_ += c;
      return;
    }
    text_ += '"';
    for (char ch : c) {
      if (ch == '"') text_ += '"';
      text_ += ch;
    }
    text_ += '"';
  }

  std::string text_;
};

}  // namespace wqt
