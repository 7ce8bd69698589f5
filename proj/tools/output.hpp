#pragma once

// Output files for the command-line tool. Every file is written to a sibling
// temporary and renamed into place.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cablesail/error.hpp"

namespace cablesail::cli {

namespace fs = std::filesystem;

inline constexpr const char* kOutputDirEnv = "CABLESAIL_OUTPUT_DIR";

/// --out flag, then $CABLESAIL_OUTPUT_DIR, then the config, then ./cablesail_out.
inline fs::path resolve_output_dir(const std::string& flag, const std::optional<fs::path>& from_config) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    if (from_config) return *from_config;
    return "cablesail_out";
}

inline void write_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Row-at-a-time CSV builder.
class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) { row_strings(header); }

    Csv& row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(num(v));
        return row_strings(cells);
    }

    Csv& row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
        ++rows_;
        return *this;
    }

    std::size_t data_rows() const { return rows_ - 1; }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    std::size_t rows_ = 0;
};

inline std::vector<std::string> numbered(const std::string& stem, int count) {
    std::vector<std::string> out;
    for (int i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

}  // namespace cablesail::cli
