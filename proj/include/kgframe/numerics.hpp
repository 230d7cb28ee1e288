#pragma once

// Dense complex matrices and the decompositions everything else is built on.
//
// Every operator in the library (analysis blocks, K, U, V, frame operators,
// projectors) is a ComplexMatrix stored row-major. All equality and rank
// decisions go through a ToleranceConfig so that, e.g., "R(U) ⊆ R(V)" gets the
// same answer whichever module asks.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kgframe {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

struct ToleranceConfig {
  double rank_rel = 1e-10;      // singular values below rank_rel * sigma_max count as zero
  double psd_rel = 1e-9;        // eigenvalue floor for PSD decisions
  double residual_rel = 1e-8;   // relative residual for equality checks

  // Throws InvalidArgument unless every field lies in (0, 1).
  void validate() const;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of row-major entries; throws on size mismatch or non-finite values.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix diagonal(std::initializer_list<double> d);
  static ComplexMatrix column(std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  CVector col(std::size_t c) const;
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& src);

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
CVector operator*(const ComplexMatrix& a, std::span<const cplx> x);

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix vstack(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_norm(const ComplexMatrix& m);
double vector_norm(std::span<const cplx> v);
bool all_finite(const ComplexMatrix& m);

// ||M - M*||_F <= residual_rel * ||M||_F
bool is_hermitian(const ComplexMatrix& m, const ToleranceConfig& tol);

// ---- decompositions -------------------------------------------------------

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns
};

// Throws NotHermitian.
HermitianEig hermitian_eig(const ComplexMatrix& m, const ToleranceConfig& tol = {});
// Eigenvalues only, ascending. Throws NotHermitian.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, const ToleranceConfig& tol = {});

struct Svd {
  ComplexMatrix u;                      // rows x rows, unitary
  std::vector<double> singular_values;  // descending, length min(rows, cols)
  ComplexMatrix v;                      // cols x cols, unitary
};

// Full SVD, M = U diag(s) V*. Throws ConvergenceFailure.
Svd svd(const ComplexMatrix& m);
std::vector<double> singular_values(const ComplexMatrix& m);

// Number of singular values >= rank_rel * sigma_max.
std::size_t rank(const ComplexMatrix& m, const ToleranceConfig& tol = {});
std::size_t rank_from_singular_values(std::span<const double> s, const ToleranceConfig& tol);

ComplexMatrix pinv(const ComplexMatrix& m, const ToleranceConfig& tol = {});
double operator_norm(const ComplexMatrix& m);

// Smallest positive singular value under the shared cutoff; 0 for a zero matrix.
double smallest_positive_singular_value(const ComplexMatrix& m, const ToleranceConfig& tol = {});

struct PsdTest {
  bool is_psd;
  double lambda_min;
};

// is_psd iff lambda_min >= -psd_rel * max(lambda_max, 1). Throws NotHermitian.
PsdTest psd_min_shift(const ComplexMatrix& m, const ToleranceConfig& tol = {});

// Orthogonal projector onto range(M).
ComplexMatrix orth_projector(const ComplexMatrix& m, const ToleranceConfig& tol = {});
// Orthonormal bases (as columns) of range(M) and of null(M).
ComplexMatrix range_basis(const ComplexMatrix& m, const ToleranceConfig& tol = {});
ComplexMatrix null_basis(const ComplexMatrix& m, const ToleranceConfig& tol = {});

// ---- pencil bisection -----------------------------------------------------

// Largest λ in [0, hi] with lhs - λ rhs ⪰ 0, found by bisection on
// psd_min_shift. lhs and rhs must be Hermitian PSD of equal size. The pencil is
// rescaled so that λ_max(lhs) = 1 and the PSD floor is sharpened (see
// sharpened_for_bisection): the overshoot past the true boundary is roughly
// floor * cond(lhs), so the user-facing psd_rel would be far too coarse.
double max_psd_multiplier(const ComplexMatrix& lhs, const ComplexMatrix& rhs, double hi,
                          const ToleranceConfig& tol, int iterations = 60);

// Smallest μ in [0, cap] with μ rhs - lhs ⪰ 0; returns +inf if even μ = cap fails.
double min_psd_multiplier(const ComplexMatrix& lhs, const ComplexMatrix& rhs, double cap,
                          const ToleranceConfig& tol, int iterations = 60);

// psd_rel clamped to kBisectionPsdFloor.
inline constexpr double kBisectionPsdFloor = 1e-13;
ToleranceConfig sharpened_for_bisection(const ToleranceConfig& tol);

}  // namespace kgframe
