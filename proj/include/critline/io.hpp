#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "critline/errors.hpp"

namespace critline {
namespace detail {

// 17 significant digits: enough to round-trip any double, and stable
// across runs so reports stay byte-identical.
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Write via a sibling temp file and rename so readers never observe a
// partially written report.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw io_error("cannot open for writing: " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw io_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec)
        throw io_error("rename failed for " + target.string() + ": " + ec.message());
}

} // namespace detail
} // namespace critline
