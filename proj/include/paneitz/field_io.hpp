#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "paneitz/fields.hpp"

// Field files carry values only; the layout is supplied by the reader.
// Index order is the in-memory order: row-major, axis 0 slowest, and
// increasing r or t for profiles.

namespace paneitz::io {

/// Raw native-endian float64 values, no header.
inline void write_binary(const std::string& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open " + path + " for writing");
    }
    const auto v = f.values();
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!out) {
        throw Error("write failed: " + path);
    }
}

inline ScalarField read_binary(const std::string& path, const Layout& layout) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw Error("cannot open " + path);
    }
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes % sizeof(double) != 0) {
        throw Error(path + ": size is not a multiple of 8 bytes");
    }
    std::vector<double> v(bytes / sizeof(double));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(bytes));
    return ScalarField(layout, std::move(v));
}

/// One value per line under a "value" header, 17 significant digits.
inline void write_csv(const std::string& path, const ScalarField& f) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (out == nullptr) {
        throw Error("cannot open " + path + " for writing");
    }
    std::fputs("value\n", out);
    for (double v : f.values()) {
        std::fprintf(out, "%.17g\n", v);
    }
    std::fclose(out);
}

inline ScalarField read_csv(const std::string& path, const Layout& layout) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    std::string line;
    std::getline(in, line);
    if (line != "value") {
        throw Error(path + ": expected a 'value' header");
    }
    std::vector<double> v;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::size_t used = 0;
        v.push_back(std::stod(line, &used));
        if (used != line.size()) {
            throw Error(path + ": malformed number '" + line + "'");
        }
    }
    return ScalarField(layout, std::move(v));
}

} // namespace paneitz::io
