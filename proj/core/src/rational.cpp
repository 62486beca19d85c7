#include "qpan/rational.hpp"

#include <Eigen/Eigenvalues>

namespace qpan {

template <std::floating_point T>
std::vector<std::complex<T>> polynomial_roots(const Polynomial<T>& p) {
    if (p.zero())
        throw validation_error("the zero polynomial has no root set");
    const int deg = p.degree();
    if (deg > kMaxRootDegree)
        throw validation_error("root extraction is limited to degree 32");
    if (deg < 1) return {};
    using Scalar = std::complex<T>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix companion = Matrix::Zero(deg, deg);
    const Scalar lead = p.leading();
    for (int k = 0; k < deg; ++k) {
        companion(k, deg - 1) = -p.coeff(k) / lead;
        if (k + 1 < deg) companion(k + 1, k) = Scalar{T(1)};
    }
    Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw numerical_error("companion eigenvalue iteration did not converge");
    std::vector<Scalar> roots(static_cast<std::size_t>(deg));
    for (int k = 0; k < deg; ++k)
        roots[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    std::sort(roots.begin(), roots.end(), [](const Scalar& a, const Scalar& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

template std::vector<std::complex<double>> polynomial_roots<double>(
    const Polynomial<double>&);
template std::vector<std::complex<long double>> polynomial_roots<long double>(
    const Polynomial<long double>&);

}  // namespace qpan
