#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ftq/errors.hpp"

namespace ftq {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
// Eigenvalues in (-kNegativeEigenTol, kZeroEigen) count as zero in entropy
// sums; anything below -kNegativeEigenTol is not a state.
inline constexpr double kNegativeEigenTol = 1e-10;
inline constexpr double kZeroEigen = 1e-12;
// Largest supported Hilbert-space dimension (six qubits).
inline constexpr int kMaxDim = 64;

// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
struct HermitianSpectrum {
    RVector eigenvalues;
    CMatrix eigenvectors;  // columns

    CMatrix reconstruct() const;

    // U f(Λ) U† for a scalar function f applied to each eigenvalue.
    template <typename F>
    CMatrix apply(F&& f) const {
        RVector mapped(eigenvalues.size());
        for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
            mapped[i] = f(eigenvalues[i]);
        }
        return eigenvectors * mapped.asDiagonal() * eigenvectors.adjoint();
    }
};

// Hermitian part is taken implicitly (only the lower triangle is read).
HermitianSpectrum eigh(const CMatrix& hermitian);

// Positive-semidefinite, unit-trace, Hermitian matrix. Construction
// validates the invariants and throws ValidationError on violation.
class DensityMatrix {
  public:
    explicit DensityMatrix(CMatrix entries);

    static DensityMatrix maximally_mixed(int dim);
    // |ψ⟩⟨ψ| for a (not necessarily normalized) nonzero vector.
    static DensityMatrix pure(const CVector& psi);
    // |k⟩⟨k| in dimension dim.
    static DensityMatrix basis(int dim, int k);

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }

  private:
    CMatrix m_;
};

// Empty string when the matrix satisfies every DensityMatrix invariant,
// otherwise a description of the first violation.
std::string density_matrix_violation(const CMatrix& m);

// Kronecker product; index pair (iA, iB) maps to iA * dim(B) + iB.
CMatrix tensor_product(const CMatrix& a, const CMatrix& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

// Traces out every subsystem not listed in `keep`. Subsystem 0 is the most
// significant factor of the row index; kept subsystems stay in ascending
// order.
CMatrix partial_trace(const CMatrix& m, std::span<const int> dims, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep);

// −Σ λ log2 λ with the clamp rules above. Throws NumericalError on an
// eigenvalue below −kNegativeEigenTol.
double entropy_of_spectrum(const RVector& eigenvalues);
double hermitian_entropy(const CMatrix& hermitian);
double von_neumann_entropy(const DensityMatrix& rho);

double binary_entropy(double x);

// Squared fidelity (Tr √(√ρ σ √ρ))².
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Square root of a PSD matrix; eigenvalues below `floor` are treated as 0.
CMatrix psd_sqrt(const CMatrix& psd, double floor = 1e-15);

// dim x cols matrix of i.i.d. standard complex Gaussians (real and imaginary
// parts each of variance 1/2).
CMatrix random_ginibre(int rows, int cols, std::mt19937_64& rng);

// AA†/Tr(AA†) with A a dim x rank Ginibre matrix drawn from `seed`.
DensityMatrix random_density_matrix(int dim, int rank, std::uint64_t seed);

// Maps (master seed, stream index) to an independent sub-seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace ftq
