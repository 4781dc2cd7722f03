#include "odeim/matrix_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "odeim/text_util.hpp"

namespace odeim {

namespace {

constexpr char kMagic[4] = {'D', 'M', 'A', 'T'};

static_assert(std::endian::native == std::endian::little,
              "binary matrix io assumes a little-endian host");

void check_dims(std::uint64_t rows, std::uint64_t cols) {
    if (rows < 1 || cols < 1)
        throw ArgumentError("matrix io: dimensions must be at least 1x1");
    if (rows > (1ull << 32) || cols > (1ull << 32) || rows * cols > (1ull << 34))
        throw ArgumentError("matrix io: implausibly large dimensions");
}

void check_finite(const Matrix& m) {
    if (!m.allFinite())
        throw ArgumentError("matrix io: non-finite entry in input");
}

}  // namespace

Matrix read_matrix_text(std::istream& in) {
    std::uint64_t rows = 0, cols = 0;
    if (!(in >> rows >> cols))
        throw ArgumentError("matrix io: failed to parse text header 'rows cols'");
    check_dims(rows, cols);
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (!(in >> m(i, j)))
                throw ArgumentError("matrix io: failed to parse entry (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
    check_finite(m);
    return m;
}

Matrix read_matrix_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw ArgumentError("matrix io: missing DMAT magic bytes");
    std::uint64_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), 8);
    in.read(reinterpret_cast<char*>(&cols), 8);
    if (!in) throw ArgumentError("matrix io: truncated binary header");
    check_dims(rows, cols);
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    std::vector<double> row(cols);
    for (Index i = 0; i < m.rows(); ++i) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(8 * cols));
        if (!in) throw ArgumentError("matrix io: truncated binary payload");
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = row[static_cast<std::size_t>(j)];
    }
    check_finite(m);
    return m;
}

Matrix read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("matrix io: cannot open '" + path + "'");
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    in.clear();
    in.seekg(0);
    if (std::memcmp(magic, kMagic, 4) == 0) return read_matrix_binary(in);
    return read_matrix_text(in);
}

void write_matrix_text(const Matrix& m, std::ostream& out) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << dtos(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw Error("matrix io: write failed");
}

void write_matrix_text(const Matrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("matrix io: cannot open '" + path + "' for writing");
    write_matrix_text(m, out);
}

void write_matrix_binary(const Matrix& m, std::ostream& out) {
    out.write(kMagic, 4);
    const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
    const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(8 * cols));
    }
    if (!out) throw Error("matrix io: write failed");
}

void write_matrix_binary(const Matrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("matrix io: cannot open '" + path + "' for writing");
    write_matrix_binary(m, out);
}

}  // namespace odeim
