#pragma once

// Small dense linear algebra: exact elimination over the rationals (also
// instantiated for doubles) and a cyclic Jacobi eigensolver for real
// symmetric matrices. Nonsymmetric spectral radii are only ever computed
// through an explicit diagonal symmetrization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "occucert/core.hpp"
#include "occucert/matrix.hpp"

namespace occucert {

namespace detail {

inline bool is_zero_pivot(const Rational& x, const Rational&) { return sgn(x) == 0; }
inline bool is_zero_pivot(double x, double scale) {
  return std::abs(x) <= 1e-13 * std::max(1.0, scale);
}
inline bool better_pivot(const Rational& cand, const Rational& best) {
  // Any nonzero pivot is exact; prefer the first one found.
  return sgn(best) == 0 && sgn(cand) != 0;
}
inline bool better_pivot(double cand, double best) { return std::abs(cand) > std::abs(best); }
inline Rational max_abs(const Matrix<Rational>&) { return Rational(0); }
inline double max_abs(const Matrix<double>& m) {
  double s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s = std::max(s, std::abs(m(i, j)));
  return s;
}

/// Gauss-Jordan elimination with full pivoting on [M | rhs]; rhs has any
/// number of columns. Returns the solution block.
template <typename T>
Matrix<T> eliminate(Matrix<T> m, Matrix<T> rhs) {
  const std::size_t n = m.rows();
  if (!m.square()) throw InputError("solve: matrix is not square");
  if (rhs.rows() != n) throw InputError("solve: right-hand side has wrong length");
  const auto scale = max_abs(m);
  std::vector<std::size_t> col_of(n);  // position -> original column
  std::iota(col_of.begin(), col_of.end(), 0);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    T best = T(0);
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (better_pivot(m(i, j), best)) {
          best = m(i, j);
          pr = i;
          pc = j;
        }
    if (is_zero_pivot(best, scale)) throw SingularMatrix(k, n);
    if (pr != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(pr, j));
      for (std::size_t j = 0; j < rhs.cols(); ++j) std::swap(rhs(k, j), rhs(pr, j));
    }
    if (pc != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(m(i, k), m(i, pc));
      std::swap(col_of[k], col_of[pc]);
    }
    const T inv = T(1) / m(k, k);
    for (std::size_t j = k; j < n; ++j) m(k, j) *= inv;
    for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(k, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m(i, k) == 0) continue;
      const T f = m(i, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) -= f * rhs(k, j);
    }
  }
  Matrix<T> x(n, rhs.cols());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < rhs.cols(); ++j) x(col_of[k], j) = rhs(k, j);
  return x;
}

}  // namespace detail

/// Solves Mx = b. Exact for Rational; throws SingularMatrix with the rank
/// reached by elimination.
template <typename T>
std::vector<T> solve(const Matrix<T>& m, std::span<const T> b) {
  Matrix<T> rhs(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
  const auto x = detail::eliminate(m, std::move(rhs));
  std::vector<T> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = x(i, 0);
  return out;
}

inline RationalVector solve_exact(const RationalMatrix& m, std::span<const Rational> b) {
  return solve<Rational>(m, b);
}
inline RationalVector solve_exact(const RationalMatrix& m, const RationalVector& b) {
  return solve<Rational>(m, std::span<const Rational>(b));
}

template <typename T>
Matrix<T> inverse(const Matrix<T>& m) {
  return detail::eliminate(m, Matrix<T>::identity(m.rows()));
}

inline RationalMatrix inverse_exact(const RationalMatrix& m) { return inverse(m); }

// ------------------------------------------------------------ modular singularity

/// Exact singularity tests for square submatrices of a rational matrix.
/// Each row is scaled to integers; a submatrix is nonsingular as soon as its
/// determinant is nonzero modulo one prime, and singular when it vanishes
/// modulo primes whose product exceeds Hadamard's bound (plus two bits for
/// rounding in the bound).
class ModularSingularity {
 public:
  explicit ModularSingularity(const RationalMatrix& m) : rows_(m.rows(), std::vector<std::int64_t>(m.cols())) {
    double log2_bound = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      mpz_class scale(1);
      for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), m(i, j).get_den_mpz_t());
      double norm2 = 0;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const mpz_class v = m(i, j).get_num() * (scale / m(i, j).get_den());
        if (!v.fits_slong_p()) return;
        rows_[i][j] = v.get_si();
        norm2 += v.get_d() * v.get_d();
      }
      log2_bound += 0.5 * std::log2(std::max(norm2, 1.0));
    }
    // Submatrix rows are shorter, so the full-row bound covers every choice.
    double have = 0;
    for (auto p : kPrimes) {
      if (have > log2_bound + 2) break;
      primes_.push_back(p);
      have += std::log2(static_cast<double>(p));
    }
    usable_ = have > log2_bound + 2;
  }

  /// Singularity of the submatrix on `rows` x `cols`; nullopt when the
  /// entries or the bound are out of reach and an exact solve must decide.
  std::optional<bool> singular(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
    if (!usable_ || rows.size() != cols.size()) return std::nullopt;
    const auto k = rows.size();
    std::vector<std::uint64_t> a(k * k);
    for (auto p : primes_) {
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
          const std::int64_t v = rows_[rows[i]][cols[j]] % static_cast<std::int64_t>(p);
          a[i * k + j] = static_cast<std::uint64_t>(v < 0 ? v + static_cast<std::int64_t>(p) : v);
        }
      if (!det_zero_mod(a, k, p)) return false;
    }
    return true;
  }

 private:
  // The eight largest primes below 2^61.
  static constexpr std::uint64_t kPrimes[] = {2305843009213693951ULL, 2305843009213693921ULL,
                                              2305843009213693907ULL, 2305843009213693723ULL,
                                              2305843009213693693ULL, 2305843009213693669ULL,
                                              2305843009213693613ULL, 2305843009213693561ULL};

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
  }
  static std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
    std::uint64_t r = 1, e = p - 2;
    for (; e; e >>= 1, a = mul(a, a, p))
      if (e & 1) r = mul(r, a, p);
    return r;
  }
  static bool det_zero_mod(std::vector<std::uint64_t>& a, std::size_t k, std::uint64_t p) {
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t piv = c;
      while (piv < k && a[piv * k + c] == 0) ++piv;
      if (piv == k) return true;
      if (piv != c)
        for (std::size_t j = 0; j < k; ++j) std::swap(a[piv * k + j], a[c * k + j]);
      const std::uint64_t iv = inv(a[c * k + c], p);
      for (std::size_t r = c + 1; r < k; ++r) {
        const std::uint64_t f = mul(a[r * k + c], iv, p);
        if (f == 0) continue;
        for (std::size_t j = c; j < k; ++j) a[r * k + j] = (a[r * k + j] + p - mul(f, a[c * k + j], p)) % p;
      }
    }
    return false;
  }

  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<std::uint64_t> primes_;
  bool usable_ = false;
};

// ------------------------------------------------------------ real spectra

/// Eigendecomposition M = Q diag(mu) Q^T; eigenvalues ascending, column i of
/// `basis` is the eigenvector of eigenvalues[i].
struct RealSymmetricSpectrum {
  RealVector eigenvalues;
  RealMatrix basis;
};

inline bool is_symmetric(const RealMatrix& m, double tol) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
/// 1e-12 (relative to max(1, ||M||_F)).
inline RealSymmetricSpectrum symmetric_spectrum(const RealMatrix& m) {
  if (!is_symmetric(m, 1e-12 * std::max(1.0, detail::max_abs(m))))
    throw PreconditionError("symmetric_spectrum: matrix is not symmetric");
  const std::size_t n = m.rows();
  RealMatrix a = m, v = RealMatrix::identity(n);
  double frob = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
  const double target = 1e-12 * std::max(1.0, std::sqrt(frob));

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return a(x, x) < a(y, y); });
  RealSymmetricSpectrum out{RealVector(n), RealMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = a(idx[c], idx[c]);
    for (std::size_t r = 0; r < n; ++r) out.basis(r, c) = v(r, idx[c]);
  }
  return out;
}

inline double spectral_radius_symmetric(const RealMatrix& m) {
  if (m.rows() == 0) return 0.0;
  const auto spec = symmetric_spectrum(m);
  return std::max(std::abs(spec.eigenvalues.front()), std::abs(spec.eigenvalues.back()));
}

/// Largest singular value.
inline double operator_norm(const RealMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (is_symmetric(m, 0.0)) return spectral_radius_symmetric(m);
  const auto gram = m.transpose() * m;
  // Gram matrices are symmetric up to rounding; symmetrize exactly.
  RealMatrix sym = gram;
  for (std::size_t i = 0; i < sym.rows(); ++i)
    for (std::size_t j = i + 1; j < sym.cols(); ++j) sym(i, j) = sym(j, i) = 0.5 * (gram(i, j) + gram(j, i));
  return std::sqrt(std::max(0.0, symmetric_spectrum(sym).eigenvalues.back()));
}

/// The symmetric matrix P T P^{-1} with P = diag(sqrt(symmetrizer)).
inline RealMatrix symmetrized(const RealMatrix& t, std::span<const double> symmetrizer) {
  if (!t.square() || symmetrizer.size() != t.rows())
    throw InputError("symmetrizer length does not match matrix");
  const std::size_t n = t.rows();
  RealVector p(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(symmetrizer[i] > 0)) throw PreconditionError("symmetrizer entries must be positive");
    p[i] = std::sqrt(symmetrizer[i]);
  }
  RealMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = p[i] * t(i, j) / p[j];
  return s;
}

/// rho(T) for T similar to a symmetric matrix via a positive diagonal.
inline double spectral_radius_similar(const RealMatrix& t, std::span<const double> symmetrizer) {
  auto s = symmetrized(t, symmetrizer);
  if (!is_symmetric(s, 1e-10 * (1.0 + detail::max_abs(s))))
    throw PreconditionError("conjugated matrix is not symmetric; wrong symmetrizer");
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j) s(i, j) = s(j, i) = 0.5 * (s(i, j) + s(j, i));
  return spectral_radius_symmetric(s);
}

struct PsdVerdict {
  bool psd = true;
  double min_eigenvalue = 0;
  double tolerance = 0;
  RealVector witness;  // eigenvector of the offending eigenvalue when !psd
};

/// PSD iff the smallest eigenvalue is >= -1e-10 (1 + ||M||).
inline PsdVerdict psd_check(const RealMatrix& m) {
  if (m.rows() == 0) return {};
  const auto spec = symmetric_spectrum(m);
  const double norm = std::max(std::abs(spec.eigenvalues.front()), std::abs(spec.eigenvalues.back()));
  PsdVerdict v;
  v.min_eigenvalue = spec.eigenvalues.front();
  v.tolerance = 1e-10 * (1.0 + norm);
  v.psd = v.min_eigenvalue >= -v.tolerance;
  if (!v.psd) {
    v.witness.resize(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) v.witness[r] = spec.basis(r, 0);
  }
  return v;
}

/// Partial sums x_j = sum_{k<=j} T^k b for j = 0..terms. Requires rho(T) < 1,
/// certified through `symmetrizer` when given and through ||T|| otherwise.
inline std::vector<RealVector> neumann_partial_sums(
    const RealMatrix& t, std::span<const double> b, std::size_t terms,
    std::optional<std::span<const double>> symmetrizer = std::nullopt) {
  if (!t.square() || t.rows() != b.size()) throw InputError("neumann_partial_sums: shape mismatch");
  const double rho = symmetrizer ? spectral_radius_similar(t, *symmetrizer) : operator_norm(t);
  if (!(rho < 1.0))
    throw PreconditionError("Neumann series needs rho(T) < 1 (bound found: " + std::to_string(rho) + ")");
  std::vector<RealVector> sums;
  RealVector power(b.begin(), b.end()), acc = power;
  sums.push_back(acc);
  for (std::size_t j = 1; j <= terms; ++j) {
    power = t * power;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += power[i];
    sums.push_back(acc);
  }
  return sums;
}

}  // namespace occucert
