#include "pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace selseg {

namespace {

[[noreturn]] void format_error(const std::string& path, std::istream& in, const std::string& msg) {
    const auto off = in.tellg();
    const std::string at = off >= 0 ? std::to_string(static_cast<long long>(off)) : "end of file";
    throw Error(ErrorCode::Format, path + ": " + msg + " (byte offset " + at + ")");
}

// Next header token, skipping whitespace and '#' comment lines.
std::string next_token(const std::string& path, std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.peek()) != EOF) {
        if (ch == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(ch)) {
            in.get();
            continue;
        }
        break;
    }
    while ((ch = in.peek()) != EOF && !std::isspace(ch) && ch != '#') tok.push_back(static_cast<char>(in.get()));
    if (tok.empty()) format_error(path, in, "unexpected end of header");
    return tok;
}

long parse_int(const std::string& path, std::istream& in, const char* what, long lo, long hi) {
    const std::string tok = next_token(path, in);
    try {
        size_t used = 0;
        const long val = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        if (val < lo || val > hi)
            format_error(path, in, std::string(what) + " out of range: " + tok);
        return val;
    } catch (const std::logic_error&) {
        format_error(path, in, std::string("invalid ") + what + ": '" + tok + "'");
    }
}

} // namespace

Field2D load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, path + ": cannot open for reading");

    const std::string magic = next_token(path, in);
    if (magic != "P2" && magic != "P5")
        format_error(path, in, "unsupported magic '" + magic + "' (need P2 or P5)");
    const bool binary = magic == "P5";

    const long nx = parse_int(path, in, "width", 1, 1 << 20);
    const long ny = parse_int(path, in, "height", 1, 1 << 20);
    const long maxval = parse_int(path, in, "maxval", 1, 65535);

    Field2D f(static_cast<int>(nx), static_cast<int>(ny));
    const double scale = 1.0 / static_cast<double>(maxval);

    if (binary) {
        const int ch = in.get();
        if (ch == EOF || !std::isspace(ch))
            format_error(path, in, "missing whitespace after maxval");
        const bool two_byte = maxval > 255;
        const size_t count = f.size() * (two_byte ? 2 : 1);
        std::vector<unsigned char> raw(count);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
        if (static_cast<size_t>(in.gcount()) != count)
            format_error(path, in, "truncated pixel payload");
        for (size_t k = 0; k < f.size(); ++k) {
            const unsigned val = two_byte
                                     ? (static_cast<unsigned>(raw[2 * k]) << 8) | raw[2 * k + 1]
                                     : raw[k];
            f.v[k] = val * scale;
        }
    } else {
        for (size_t k = 0; k < f.size(); ++k) {
            if (!(in >> std::ws)) format_error(path, in, "truncated pixel payload");
            const long val = parse_int(path, in, "sample", 0, maxval);
            f.v[k] = val * scale;
        }
    }
    return f;
}

void write_pgm(const Field2D& f, const std::string& path, int maxval) {
    if (maxval != 255 && maxval != 65535)
        throw Error(ErrorCode::Param, "write_pgm: maxval must be 255 or 65535");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, path + ": cannot open for writing");
    out << "P5\n" << f.nx << " " << f.ny << "\n" << maxval << "\n";
    for (double x : f.v) {
        const double clamped = std::clamp(x, 0.0, 1.0);
        const unsigned val = static_cast<unsigned>(std::lround(clamped * maxval));
        if (maxval > 255) {
            out.put(static_cast<char>((val >> 8) & 0xFF));
            out.put(static_cast<char>(val & 0xFF));
        } else {
            out.put(static_cast<char>(val & 0xFF));
        }
    }
    if (!out) throw Error(ErrorCode::Io, path + ": write failed");
}

void write_mask_pgm(const std::vector<std::uint8_t>& mask, int nx, int ny,
                    const std::string& path) {
    if (mask.size() != static_cast<size_t>(nx) * ny)
        throw Error(ErrorCode::Dimension, "write_mask_pgm: mask size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, path + ": cannot open for writing");
    out << "P5\n" << nx << " " << ny << "\n255\n";
    out.write(reinterpret_cast<const char*>(mask.data()), static_cast<std::streamsize>(mask.size()));
    if (!out) throw Error(ErrorCode::Io, path + ": write failed");
}

std::vector<std::uint8_t> zero_level_overlay(const Field2D& phi) {
    std::vector<std::uint8_t> overlay(phi.size(), 0);
    for (int j = 0; j < phi.ny; ++j) {
        for (int i = 0; i < phi.nx; ++i) {
            const bool pos = phi.at(i, j) > 0.0;
            const bool edge =
                (i + 1 < phi.nx && (phi.at(i + 1, j) > 0.0) != pos) ||
                (i - 1 >= 0 && (phi.at(i - 1, j) > 0.0) != pos) ||
                (j + 1 < phi.ny && (phi.at(i, j + 1) > 0.0) != pos) ||
                (j - 1 >= 0 && (phi.at(i, j - 1) > 0.0) != pos);
            if (edge) overlay[phi.idx(i, j)] = 255;
        }
    }
    return overlay;
}

Field2D resize_bilinear(const Field2D& f, int nx, int ny) {
    Field2D out(nx, ny);
    const double sx = static_cast<double>(f.nx) / nx;
    const double sy = static_cast<double>(f.ny) / ny;
    for (int j = 0; j < ny; ++j) {
        const double y = (j + 0.5) * sy - 0.5;
        const int j0 = static_cast<int>(std::floor(y));
        const double wy = y - j0;
        for (int i = 0; i < nx; ++i) {
            const double x = (i + 0.5) * sx - 0.5;
            const int i0 = static_cast<int>(std::floor(x));
            const double wx = x - i0;
            const double v00 = f.at_mirrored(i0, j0);
            const double v10 = f.at_mirrored(i0 + 1, j0);
            const double v01 = f.at_mirrored(i0, j0 + 1);
            const double v11 = f.at_mirrored(i0 + 1, j0 + 1);
            out.at(i, j) = (1 - wx) * (1 - wy) * v00 + wx * (1 - wy) * v10 +
                           (1 - wx) * wy * v01 + wx * wy * v11;
        }
    }
    return out;
}

Field2D crop_centered(const Field2D& f, int nx, int ny) {
    if (nx > f.nx || ny > f.ny)
        throw Error(ErrorCode::Dimension, "crop_centered: crop larger than the field");
    const int ox = (f.nx - nx) / 2;
    const int oy = (f.ny - ny) / 2;
    Field2D out(nx, ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) out.at(i, j) = f.at(i + ox, j + oy);
    return out;
}

} // namespace selseg
