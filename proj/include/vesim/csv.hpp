#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "vesim/errors.hpp"

namespace vesim {

// Round-trip-exact float formatting: %.17g reproduces every double bit-for-bit
// on read-back, and the output bytes are deterministic across runs.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, std::initializer_list<std::string> columns)
        : out_(path), n_cols_(columns.size()) {
        if (!out_) throw ConfigError("cannot open output file: " + path);
        bool first = true;
        for (const auto& c : columns) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) {
        if (values.size() != n_cols_)
            throw ConfigError("csv row width does not match header");
        bool first = true;
        for (double v : values) {
            if (!first) out_ << ',';
            out_ << format_double(v);
            first = false;
        }
        out_ << '\n';
    }

    // Mixed row for tables with text cells (e.g. mode labels).
    void row(const std::vector<std::string>& cells) {
        if (cells.size() != n_cols_)
            throw ConfigError("csv row width does not match header");
        bool first = true;
        for (const auto& c : cells) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
    std::size_t n_cols_;
};

}  // namespace vesim
