#include "ftq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ftq/errors.hpp"

namespace ftq {

CMatrix HermitianSpectrum::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

HermitianSpectrum eigh(const CMatrix& hermitian) {
    if (hermitian.rows() != hermitian.cols()) {
        throw ValidationError("eigh: matrix is not square");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigh: eigendecomposition did not converge");
    }
    // Eigen sorts ascending; reverse to descending.
    HermitianSpectrum out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

std::string density_matrix_violation(const CMatrix& m) {
    std::ostringstream why;
    if (m.rows() == 0 || m.rows() != m.cols()) {
        why << "matrix is " << m.rows() << "x" << m.cols() << ", expected nonempty square";
        return why.str();
    }
    if (m.rows() > kMaxDim) {
        why << "dimension " << m.rows() << " exceeds the supported maximum " << kMaxDim;
        return why.str();
    }
    if (!m.allFinite()) {
        return "matrix has non-finite entries";
    }
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTol) {
        why << "not Hermitian (max asymmetry " << asym << ")";
        return why.str();
    }
    const Complex tr = m.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
        why << "trace " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i differs from 1";
        return why.str();
    }
    const double min_eig = eigh(m).eigenvalues.minCoeff();
    if (min_eig < -kNegativeEigenTol) {
        why << "not positive semidefinite (smallest eigenvalue " << min_eig << ")";
        return why.str();
    }
    return {};
}

DensityMatrix::DensityMatrix(CMatrix entries) : m_(std::move(entries)) {
    if (auto why = density_matrix_violation(m_); !why.empty()) {
        throw ValidationError("invalid density matrix: " + why);
    }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    if (dim < 1) throw ValidationError("maximally_mixed: dimension must be positive");
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw ValidationError("pure: zero vector");
    const CVector unit = psi / norm;
    return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::basis(int dim, int k) {
    if (k < 0 || k >= dim) throw ValidationError("basis: index out of range");
    CVector e = CVector::Zero(dim);
    e[k] = 1.0;
    return pure(e);
}

CMatrix tensor_product(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(tensor_product(a.matrix(), b.matrix()));
}

CMatrix partial_trace(const CMatrix& m, std::span<const int> dims, std::span<const int> keep) {
    const int n = static_cast<int>(dims.size());
    if (n == 0) throw ValidationError("partial_trace: no subsystems given");
    long total = 1;
    for (int d : dims) {
        if (d < 1) throw ValidationError("partial_trace: subsystem dimensions must be positive");
        total *= d;
    }
    if (m.rows() != m.cols() || total != m.rows()) {
        std::ostringstream why;
        why << "partial_trace: product of subsystem dimensions " << total
            << " does not match matrix dimension " << m.rows();
        throw ValidationError(why.str());
    }
    if (keep.empty()) throw ValidationError("partial_trace: keep set is empty");
    std::vector<bool> kept(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n) throw ValidationError("partial_trace: keep index out of range");
        if (kept[k]) throw ValidationError("partial_trace: duplicate keep index");
        kept[k] = true;
    }

    // Strides for row-major mixed-radix indexing (subsystem 0 most significant).
    std::vector<long> stride(n, 1);
    for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

    std::vector<int> kept_ids, traced_ids;
    for (int s = 0; s < n; ++s) (kept[s] ? kept_ids : traced_ids).push_back(s);
    long kept_dim = 1, traced_dim = 1;
    for (int s : kept_ids) kept_dim *= dims[s];
    for (int s : traced_ids) traced_dim *= dims[s];

    // Offset into the full index contributed by a kept (resp. traced) multi-index.
    auto offsets = [&](const std::vector<int>& ids, long count) {
        std::vector<long> off(count, 0);
        for (long flat = 0; flat < count; ++flat) {
            long rem = flat;
            long acc = 0;
            for (int t = static_cast<int>(ids.size()) - 1; t >= 0; --t) {
                const int s = ids[t];
                acc += (rem % dims[s]) * stride[s];
                rem /= dims[s];
            }
            off[flat] = acc;
        }
        return off;
    };
    const auto kept_off = offsets(kept_ids, kept_dim);
    const auto traced_off = offsets(traced_ids, traced_dim);

    CMatrix out = CMatrix::Zero(kept_dim, kept_dim);
    for (long i = 0; i < kept_dim; ++i) {
        for (long j = 0; j < kept_dim; ++j) {
            Complex acc = 0.0;
            for (long t = 0; t < traced_dim; ++t) {
                acc += m(kept_off[i] + traced_off[t], kept_off[j] + traced_off[t]);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep) {
    return DensityMatrix(partial_trace(rho.matrix(), dims, keep));
}

double entropy_of_spectrum(const RVector& eigenvalues) {
    double s = 0.0;
    for (double lambda : eigenvalues) {
        if (lambda < -kNegativeEigenTol) {
            std::ostringstream why;
            why << "entropy: eigenvalue " << lambda << " is below -" << kNegativeEigenTol;
            throw NumericalError(why.str());
        }
        if (lambda < kZeroEigen) continue;
        s -= lambda * std::log2(lambda);
    }
    return std::max(s, 0.0);
}

double hermitian_entropy(const CMatrix& hermitian) {
    return entropy_of_spectrum(eigh(hermitian).eigenvalues);
}

double von_neumann_entropy(const DensityMatrix& rho) { return hermitian_entropy(rho.matrix()); }

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        std::ostringstream why;
        why << "binary_entropy: argument " << x << " outside [0, 1]";
        throw ValidationError(why.str());
    }
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

CMatrix psd_sqrt(const CMatrix& psd, double floor) {
    return eigh(psd).apply([floor](double l) { return l < floor ? 0.0 : std::sqrt(l); });
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw ValidationError("fidelity: dimension mismatch (" + std::to_string(rho.dim()) + " vs " +
                              std::to_string(sigma.dim()) + ")");
    }
    const CMatrix root = psd_sqrt(rho.matrix());
    const CMatrix inner = root * sigma.matrix() * root;
    double trace_root = 0.0;
    for (double l : eigh(inner).eigenvalues) {
        if (l > 1e-15) trace_root += std::sqrt(l);
    }
    return std::clamp(trace_root * trace_root, 0.0, 1.0);
}

CMatrix random_ginibre(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix a(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            a(i, j) = Complex(re, im);
        }
    }
    return a;
}

DensityMatrix random_density_matrix(int dim, int rank, std::uint64_t seed) {
    if (dim < 1 || dim > kMaxDim) throw ValidationError("random_density_matrix: dimension out of range");
    if (rank < 1 || rank > dim) {
        throw ValidationError("random_density_matrix: rank " + std::to_string(rank) +
                              " outside [1, " + std::to_string(dim) + "]");
    }
    std::mt19937_64 rng(seed);
    const CMatrix a = random_ginibre(dim, rank, rng);
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    // Exact Hermitian symmetry; the product is Hermitian only up to rounding.
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return DensityMatrix(std::move(rho));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer over the combined words.
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace ftq
