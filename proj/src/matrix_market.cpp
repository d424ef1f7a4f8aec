#include "rwsolv/matrix_market.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rwsolv {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& why) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + why);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

struct Header {
    bool coordinate = false;
    bool symmetric = false;
};

Header read_header(std::istream& in, const std::string& path, int& line_no) {
    std::string line;
    if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
    line_no = 1;
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") parse_fail(path, 1, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix") parse_fail(path, 1, "unsupported object '" + object + "'");
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate" && format != "array")
        parse_fail(path, 1, "unsupported format '" + format + "'");
    if (field != "real" && field != "integer")
        parse_fail(path, 1, "unsupported field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        parse_fail(path, 1, "unsupported symmetry '" + symmetry + "'");
    return {format == "coordinate", symmetry == "symmetric"};
}

bool next_content_line(std::istream& in, std::string& line, int& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos) continue;
        if (line[i] == '%') continue;
        return true;
    }
    return false;
}

}  // namespace

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    int line_no = 0;
    const Header h = read_header(in, path, line_no);
    if (!h.coordinate) parse_fail(path, 1, "expected coordinate format for a matrix");

    std::string line;
    if (!next_content_line(in, line, line_no)) parse_fail(path, line_no, "missing size line");
    std::istringstream szs(line);
    long long rows = -1, cols = -1, count = -1;
    if (!(szs >> rows >> cols >> count) || rows < 0 || cols < 0 || count < 0)
        parse_fail(path, line_no, "malformed size line");
    if (rows != cols) parse_fail(path, line_no, "matrix is not square");

    std::vector<Triplet> entries;
    entries.reserve(static_cast<size_t>(count));
    for (long long k = 0; k < count; ++k) {
        if (!next_content_line(in, line, line_no))
            parse_fail(path, line_no, "unexpected end of file: expected " +
                                          std::to_string(count) + " entries");
        std::istringstream es(line);
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(es >> i >> j >> v)) parse_fail(path, line_no, "malformed entry line");
        if (i < 1 || i > rows || j < 1 || j > cols)
            parse_fail(path, line_no, "entry index out of range");
        if (h.symmetric && j > i)
            parse_fail(path, line_no, "symmetric file stores upper-triangle entry");
        entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
        if (h.symmetric && i != j)
            entries.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), v});
    }
    SparseMatrix m = from_triplets(static_cast<int>(rows), entries);
    m.symmetric_hint = h.symmetric;
    return m;
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
    a.check_structure();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.precision(17);

    bool symmetric = a.symmetric_hint;
    if (symmetric) {
        for (int i = 0; i < a.n && symmetric; ++i)
            for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e)
                if (a.col_idx[e] > i && a.coeff(a.col_idx[e], i) != a.values[e]) {
                    symmetric = false;
                    break;
                }
    }

    int count = 0;
    if (symmetric) {
        for (int i = 0; i < a.n; ++i)
            for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e)
                if (a.col_idx[e] <= i) ++count;
    } else {
        count = a.nnz();
    }

    out << "%%MatrixMarket matrix coordinate real "
        << (symmetric ? "symmetric" : "general") << "\n";
    out << a.n << " " << a.n << " " << count << "\n";
    for (int i = 0; i < a.n; ++i)
        for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
            if (symmetric && a.col_idx[e] > i) continue;
            out << i + 1 << " " << a.col_idx[e] + 1 << " " << a.values[e] << "\n";
        }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<double> read_vector_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    int line_no = 0;
    const Header h = read_header(in, path, line_no);
    if (h.coordinate) parse_fail(path, 1, "expected array format for a vector");

    std::string line;
    if (!next_content_line(in, line, line_no)) parse_fail(path, line_no, "missing size line");
    std::istringstream szs(line);
    long long rows = -1, cols = -1;
    if (!(szs >> rows >> cols) || rows < 0 || cols != 1)
        parse_fail(path, line_no, "expected an n-by-1 array");

    std::vector<double> x;
    x.reserve(static_cast<size_t>(rows));
    for (long long k = 0; k < rows; ++k) {
        if (!next_content_line(in, line, line_no))
            parse_fail(path, line_no, "unexpected end of file in array data");
        std::istringstream es(line);
        double v = 0.0;
        if (!(es >> v)) parse_fail(path, line_no, "malformed array value");
        x.push_back(v);
    }
    return x;
}

void write_vector_market(const std::string& path, const std::vector<double>& x) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.precision(17);
    out << "%%MatrixMarket matrix array real general\n";
    out << x.size() << " 1\n";
    for (double v : x) out << v << "\n";
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace rwsolv
