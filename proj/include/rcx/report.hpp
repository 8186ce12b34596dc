#pragma once

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "rcx/common.hpp"

namespace rcx::report {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Structured PASS/FAIL report: one line per claim, "PASS name measured bound",
// deterministic for a fixed configuration and seed.
class Report {
 public:
  bool pass = true;

  void check(bool ok, const std::string& name, const std::string& measured,
             const std::string& bound) {
    lines_.push_back(std::string(ok ? "PASS " : "FAIL ") + name +
                     " measured=" + measured + " bound=" + bound);
    pass = pass && ok;
  }
  void check(bool ok, const std::string& name, double measured, double bound) {
    check(ok, name, fmt(measured), fmt(bound));
  }
  void value(const std::string& name, const std::string& v) {
    lines_.push_back("INFO " + name + " " + v);
  }
  void value(const std::string& name, double v) { value(name, fmt(v)); }
  void note(const std::string& text) { lines_.push_back("NOTE " + text); }

  void print(std::ostream& os) const {
    for (const auto& l : lines_) os << l << "\n";
    os << (pass ? "RESULT PASS" : "RESULT FAIL") << "\n";
  }

  int exit_code() const { return pass ? 0 : 1; }

 private:
  std::vector<std::string> lines_;
};

}  // namespace rcx::report
