#pragma once

#include <fstream>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "degspec/errors.hpp"
#include "degspec/spectrum.hpp"

namespace degspec::cli {

inline constexpr const char* csv_header = "re_lambda,im_lambda,re_delta,im_delta,abs_delta,est_error";

/// One row per lattice point in scan order, 17 significant digits, LF endings.
inline void emit_csv(const ScanGrid& grid, std::ostream& os)
{
    if (grid.samples.empty()) {
        throw ValidationError("emit_csv: grid is empty");
    }
    os << csv_header << '\n';
    for (const auto& s : grid.samples) {
        fmt::print(os, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.lambda.real(), s.lambda.imag(),
                   s.delta.real(), s.delta.imag(), std::abs(s.delta), s.est_error);
    }
}

inline void emit_csv(const ScanGrid& grid, const std::string& path)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    emit_csv(grid, file);
    file.flush();
    if (!file) {
        throw IoError("failed writing '" + path + "'");
    }
}

}  // namespace degspec::cli
