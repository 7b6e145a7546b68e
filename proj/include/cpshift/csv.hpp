// ─────────────────────────────────────────────────────────────────────────────
//  csv.hpp — deterministic CSV output.
//
//  All numeric fields are rendered in scientific notation with nine
//  significant digits ("%.8e"), so repeated runs are byte-identical.
//  Rows are terminated with '\n'; comment lines start with "# ".
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "types.hpp"

namespace cpshift {

/// "%.8e" rendering of a double (nine significant digits).
[[nodiscard]] inline std::string format_sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", x);
    return std::string(buf);
}

/// Line-oriented CSV assembler.
class CsvWriter {
  public:
    void comment(const std::string& line) { data_ += "# " + line + "\n"; }

    void header(const std::vector<std::string>& columns) { raw_row(columns); }

    void row(const std::vector<std::string>& fields) { raw_row(fields); }

    void numeric_row(const std::vector<double>& values) {
        std::vector<std::string> fields;
        fields.reserve(values.size());
        for (double v : values) fields.push_back(format_sci(v));
        raw_row(fields);
    }

    [[nodiscard]] const std::string& str() const { return data_; }

    /// Write to a file, or to stdout when path is "-" or empty.
    void write(const std::string& path) const {
        if (path.empty() || path == "-") {
            std::cout << data_;
            std::cout.flush();
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw ValidationError("cannot open output file '" + path + "'");
        f << data_;
    }

  private:
    void raw_row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) data_ += ',';
            data_ += fields[i];
        }
        data_ += '\n';
    }

    std::string data_;
};

} // namespace cpshift
