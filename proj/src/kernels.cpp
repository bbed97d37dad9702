#include "lapchol/kernels.hpp"

#include <cmath>

namespace lapchol::kernels {

namespace {

void check(std::size_t a, std::size_t b)
{
    if (a != b) {
        throw DimensionMismatch("kernel operands differ in length");
    }
}

inline double row_product(const SparseSym& a, std::span<const double> x, std::size_t i)
{
    const auto& ptr = a.row_ptr();
    const auto& col = a.col_idx();
    const auto& val = a.values();
    double acc = a.diag(i) * x[i];
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) {
        acc += val[k] * x[col[k]];
    }
    return acc;
}

}  // namespace

namespace serial {

void spmv(const SparseSym& a, std::span<const double> x, std::span<double> y)
{
    check(x.size(), a.size());
    check(y.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        y[i] = row_product(a, x, i);
    }
}

double dot(std::span<const double> x, std::span<const double> y)
{
    check(x.size(), y.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    check(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace serial

namespace parallel {

void spmv(const SparseSym& a, std::span<const double> x, std::span<double> y)
{
    check(x.size(), a.size());
    check(y.size(), a.size());
    const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = row_product(a, x, static_cast<std::size_t>(i));
    }
}

double dot(std::span<const double> x, std::span<const double> y)
{
    check(x.size(), y.size());
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    check(x.size(), y.size());
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] += alpha * x[static_cast<std::size_t>(i)];
    }
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace parallel

}  // namespace lapchol::kernels
