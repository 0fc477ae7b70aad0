#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "critline/errors.hpp"
#include "critline/io.hpp"

namespace critline {

// Ordered critical-line zero ordinates plus the refinement tolerance each
// was produced with.  Immutable once built; share freely.
struct ZeroList {
    enum class Source { computed, loaded };

    std::vector<double> ordinates;
    std::vector<double> tolerances;
    Source source = Source::computed;

    void validate() const {
        if (ordinates.size() != tolerances.size())
            throw precondition_error("ZeroList: ordinate/tolerance length mismatch");
        double prev = 1.0; // first nontrivial ordinate exceeds 1; checked, not assumed
        for (double t : ordinates) {
            if (!(t > prev))
                throw precondition_error("ZeroList: ordinates must be strictly increasing and > 1");
            prev = t;
        }
        for (double tol : tolerances)
            if (!(tol > 0.0))
                throw precondition_error("ZeroList: tolerances must be positive");
    }
};

// File format: one record per line, `index<TAB>ordinate<TAB>tolerance`,
// ASCII decimal, increasing ordinates; `#` starts a comment line.
inline std::string format_zero_list(const ZeroList& list) {
    std::string out;
    for (std::size_t i = 0; i < list.ordinates.size(); ++i) {
        out += std::to_string(i + 1);
        out += '\t';
        out += detail::fmt_double(list.ordinates[i]);
        out += '\t';
        out += detail::fmt_double(list.tolerances[i]);
        out += '\n';
    }
    return out;
}

inline void write_zero_list(const std::string& path, const ZeroList& list) {
    list.validate();
    detail::write_file_atomic(path, format_zero_list(list));
}

inline ZeroList read_zero_list(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open zero list: " + path);
    ZeroList list;
    list.source = ZeroList::Source::loaded;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream fields(line);
        long index = 0;
        double ordinate = 0.0, tol = 0.0;
        if (!(fields >> index >> ordinate >> tol))
            throw io_error(path + ":" + std::to_string(lineno) + ": malformed zero record");
        if (index != static_cast<long>(list.ordinates.size()) + 1)
            throw io_error(path + ":" + std::to_string(lineno) + ": indices must be 1,2,3,...");
        list.ordinates.push_back(ordinate);
        list.tolerances.push_back(tol);
    }
    list.validate();
    return list;
}

} // namespace critline
