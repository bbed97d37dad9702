#pragma once

#include "lapchol/sparse.hpp"

#include <iosfwd>
#include <string>

namespace lapchol {

class ParseError : public Error {
public:
    using Error::Error;
};

/// Reads `coordinate real|integer symmetric|general`. General files must be
/// numerically symmetric. Complex and pattern fields are rejected.
SparseSym read_matrix_market(std::istream& in);
SparseSym read_matrix_market(const std::string& path);

/// Writes `coordinate real symmetric`, lower triangle, 1-based.
void write_matrix_market(std::ostream& out, const SparseSym& m, const std::string& comment = {});
void write_matrix_market(const std::string& path, const SparseSym& m, const std::string& comment = {});

}  // namespace lapchol
