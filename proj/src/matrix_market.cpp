#include "lapchol/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lapchol {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

SparseSym read_matrix_market(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty MatrixMarket stream");
    }
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket" || lower(object) != "matrix") {
        throw ParseError("missing %%MatrixMarket matrix banner");
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate") {
        throw ParseError("only coordinate MatrixMarket files are supported, got '" + format + "'");
    }
    if (field == "complex" || field == "pattern") {
        throw ParseError("unsupported MatrixMarket field '" + field + "': need real or integer values");
    }
    if (field != "real" && field != "integer" && field != "double") {
        throw ParseError("unknown MatrixMarket field '" + field + "'");
    }
    if (symmetry != "symmetric" && symmetry != "general") {
        throw ParseError("unsupported MatrixMarket symmetry '" + symmetry + "'");
    }

    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%' && line.find_first_not_of(" \t\r") != std::string::npos) {
            break;
        }
    }
    std::istringstream header(line);
    std::size_t rows = 0, cols = 0, count = 0;
    if (!(header >> rows >> cols >> count)) {
        throw ParseError("malformed MatrixMarket size line");
    }
    if (rows != cols) {
        throw ParseError("matrix is not square");
    }
    if (rows > std::numeric_limits<Vertex>::max()) {
        throw ParseError("matrix too large");
    }

    std::vector<Triplet> entries;
    entries.reserve(count);
    std::size_t r = 0, c = 0;
    double v = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        if (!(in >> r >> c >> v)) {
            throw ParseError("expected " + std::to_string(count) + " entries, read " + std::to_string(k));
        }
        if (r < 1 || c < 1 || r > rows || c > cols) {
            throw ParseError("entry index out of range at entry " + std::to_string(k + 1));
        }
        entries.push_back({static_cast<Vertex>(r - 1), static_cast<Vertex>(c - 1), v});
    }
    return SparseSym::from_triplets(rows, entries, symmetry == "general");
}

SparseSym read_matrix_market(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseSym& m, const std::string& comment)
{
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    if (!comment.empty()) {
        std::istringstream lines(comment);
        std::string line;
        while (std::getline(lines, line)) {
            out << "% " << line << '\n';
        }
    }
    std::size_t diag_count = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        diag_count += m.diag(i) != 0.0;
    }
    out << m.size() << ' ' << m.size() << ' ' << m.offdiag_pairs() + diag_count << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto cols = m.row_cols(i);
        const auto vals = m.row_vals(i);
        for (std::size_t k = 0; k < cols.size() && cols[k] < i; ++k) {
            out << i + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
        }
        if (m.diag(i) != 0.0) {
            out << i + 1 << ' ' << i + 1 << ' ' << m.diag(i) << '\n';
        }
    }
}

void write_matrix_market(const std::string& path, const SparseSym& m, const std::string& comment)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path);
    }
    write_matrix_market(out, m, comment);
}

}  // namespace lapchol
