#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppqc/errors.hpp"

namespace ppqc {

using Complex = std::complex<double>;

// Max-abs entry deviation accepted when a matrix must be Hermitian or unitary.
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-10;

// Dense row-major complex matrix. Sized for Hilbert spaces up to 2^12, where
// a full matrix is 4096 x 4096; no sparse path.
struct ComplexMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> entries;  // row-major, rows * cols

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  Complex& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

  bool square() const { return rows == cols; }
};

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw DimensionError("matrix addition: shapes differ");
  ComplexMatrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = a.entries[i] + b.entries[i];
  return c;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw DimensionError("matrix subtraction: shapes differ");
  ComplexMatrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = a.entries[i] - b.entries[i];
  return c;
}

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = s * a.entries[i];
  return c;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows)
    throw DimensionError("matrix product: inner dimensions differ");
  ComplexMatrix c(a.rows, b.cols);
  // ikj order; the zero skip pays off for permutation matrices and projectors.
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      const Complex* brow = &b.entries[k * b.cols];
      Complex* crow = &c.entries[i * c.cols];
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

inline std::vector<Complex> operator*(const ComplexMatrix& a, const std::vector<Complex>& v) {
  if (a.cols != v.size())
    throw DimensionError("matrix-vector product: dimensions differ");
  std::vector<Complex> out(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    Complex acc = 0.0;
    const Complex* arow = &a.entries[i * a.cols];
    for (std::size_t j = 0; j < a.cols; ++j) acc += arow[j] * v[j];
    out[i] = acc;
  }
  return out;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix c(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) c(j, i) = std::conj(a(i, j));
  return c;
}

inline Complex trace(const ComplexMatrix& a) {
  if (!a.square()) throw DimensionError("trace: matrix not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) t += a(i, i);
  return t;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw DimensionError("max_abs_diff: shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
  return m;
}

// Largest |m(i,j) - conj(m(j,i))|.
inline double hermiticity_violation(const ComplexMatrix& m) {
  if (!m.square()) throw DimensionError("hermiticity_violation: matrix not square");
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = i; j < m.cols; ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

// Largest |(U U† - I)(i,j)|.
inline double unitarity_violation(const ComplexMatrix& u) {
  if (!u.square()) throw DimensionError("unitarity_violation: matrix not square");
  ComplexMatrix prod = u * adjoint(u);
  return max_abs_diff(prod, ComplexMatrix::identity(u.rows));
}

inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows; ++k)
        for (std::size_t l = 0; l < b.cols; ++l)
          c(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
    }
  }
  return c;
}

// Bipartition of a dim_a * dim_b space. Subsystem A owns the most significant
// part of the basis index: index = a * dim_b + b.
struct SubsystemSplit {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
};

enum class Subsystem { A, B };

namespace detail {
inline void check_split(const ComplexMatrix& rho, const SubsystemSplit& split, const char* op) {
  if (!rho.square())
    throw DimensionError(std::string(op) + ": matrix not square");
  if (split.dim_a == 0 || split.dim_b == 0 || split.dim_a * split.dim_b != rho.rows)
    throw DimensionError(std::string(op) + ": split does not factor the matrix dimension");
}
}  // namespace detail

inline ComplexMatrix partial_trace(const ComplexMatrix& rho, const SubsystemSplit& split,
                                   Subsystem keep) {
  detail::check_split(rho, split, "partial_trace");
  const std::size_t da = split.dim_a, db = split.dim_b;
  if (keep == Subsystem::A) {
    ComplexMatrix out(da, da);
    for (std::size_t a = 0; a < da; ++a)
      for (std::size_t a2 = 0; a2 < da; ++a2) {
        Complex acc = 0.0;
        for (std::size_t b = 0; b < db; ++b) acc += rho(a * db + b, a2 * db + b);
        out(a, a2) = acc;
      }
    return out;
  }
  ComplexMatrix out(db, db);
  for (std::size_t b = 0; b < db; ++b)
    for (std::size_t b2 = 0; b2 < db; ++b2) {
      Complex acc = 0.0;
      for (std::size_t a = 0; a < da; ++a) acc += rho(a * db + b, a * db + b2);
      out(b, b2) = acc;
    }
  return out;
}

inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, const SubsystemSplit& split,
                                       Subsystem which) {
  detail::check_split(rho, split, "partial_transpose");
  const std::size_t da = split.dim_a, db = split.dim_b;
  ComplexMatrix out(rho.rows, rho.cols);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t b2 = 0; b2 < db; ++b2) {
          // transpose only the chosen factor's indices
          const std::size_t src = (which == Subsystem::B) ? (a * db + b2) * rho.cols + (a2 * db + b)
                                                          : (a2 * db + b) * rho.cols + (a * db + b2);
          out(a * db + b, a2 * db + b2) = rho.entries[src];
        }
  return out;
}

namespace detail {
inline Eigen::MatrixXcd symmetrized_eigen_view(const ComplexMatrix& h, const char* op) {
  if (!h.square()) throw DimensionError(std::string(op) + ": matrix not square");
  if (hermiticity_violation(h) > kHermitianTolerance)
    throw NotHermitianError(std::string(op) + ": matrix is not Hermitian within tolerance");
  const auto n = static_cast<Eigen::Index>(h.rows);
  Eigen::MatrixXcd m(n, n);
  // (H + H†)/2 absorbs roundoff accumulated by long gate sequences.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = 0.5 * (h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                       std::conj(h(static_cast<std::size_t>(j), static_cast<std::size_t>(i))));
  return m;
}
}  // namespace detail

// All eigenvalues of a Hermitian matrix, ascending. Deterministic for a fixed
// input.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  Eigen::MatrixXcd m = detail::symmetrized_eigen_view(h, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return out;
}

inline double min_eigenvalue(const ComplexMatrix& h) {
  Eigen::MatrixXcd m = detail::symmetrized_eigen_view(h, "min_eigenvalue");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace ppqc
