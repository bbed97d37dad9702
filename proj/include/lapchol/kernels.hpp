#pragma once

#include "lapchol/sparse.hpp"

#include <span>

// Vector kernels in two flavours: a serial reference and an OpenMP version.
// The parallel spmv computes each row exactly as the serial one does, so the
// results are bitwise equal. The parallel reductions are not.
namespace lapchol::kernels {

namespace serial {
void spmv(const SparseSym& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double norm2(std::span<const double> x);
}  // namespace serial

namespace parallel {
void spmv(const SparseSym& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double norm2(std::span<const double> x);
}  // namespace parallel

}  // namespace lapchol::kernels
