#include "srbloch/core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <sstream>

namespace srbloch {

using namespace std::complex_literals;

const Eigen::Matrix2cd& pauli(int i) {
    static const Eigen::Matrix2cd s1 = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    static const Eigen::Matrix2cd s2 = (Eigen::Matrix2cd() << 0, -1i, 1i, 0).finished();
    static const Eigen::Matrix2cd s3 = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    switch (i) {
        case 1: return s1;
        case 2: return s2;
        default: return s3;
    }
}

SystemParams validate_params(const SystemParams& raw) {
    if (raw.t1 <= 0.0 || raw.t2 <= 0.0) {
        std::ostringstream os;
        os << "relaxation times must be positive (t1=" << raw.t1
           << " s, t2=" << raw.t2 << " s)";
        throw NonPositiveTime(os.str());
    }
    if (raw.t2 > 2.0 * raw.t1) {
        std::ostringstream os;
        os << "t2 <= 2*t1 violated (t1=" << raw.t1 << " s, t2=" << raw.t2 << " s)";
        throw T2Bound(os.str());
    }
    if (std::abs(raw.s_eq) > 1.0) {
        std::ostringstream os;
        os << "|s_eq| <= 1 violated (s_eq=" << raw.s_eq << ")";
        throw BlochBound(os.str());
    }
    if (raw.omega1 < 0.0) {
        throw ValidationError("omega1 must be >= 0");
    }
    if (raw.omega0 < 0.0) {
        throw ValidationError("omega0 must be >= 0");
    }
    SystemParams p = raw;
    p.weak_drive = (2.0 * p.omega1 < 0.01 * p.omega0);
    return p;
}

RelaxationMatrix relaxation_matrix(const SystemParams& p) {
    RelaxationMatrix a = RelaxationMatrix::Zero();
    const double half_gamma1 = 1.0 / (2.0 * p.t1);
    a(0, 0) = half_gamma1;
    a(1, 1) = half_gamma1;
    a(2, 2) = 1.0 / p.t2 - half_gamma1;
    const std::complex<double> a12 = 1i * p.s_eq / (std::sqrt(2.0) * p.t1);
    a(0, 1) = a12;
    a(1, 0) = std::conj(a12);
    return a;
}

PsdReport psd_check(const RelaxationMatrix& a, double tol) {
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw NotHermitian("relaxation matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<RelaxationMatrix> es(a, Eigen::EigenvaluesOnly);
    const double min_ev = es.eigenvalues().minCoeff();
    return {min_ev >= -tol, min_ev};
}

DensityMatrix bloch_to_density(const BlochState& s) {
    DensityMatrix rho = DensityMatrix::Identity();
    rho += s.s1 * pauli(1) + s.s2 * pauli(2) + s.s3 * pauli(3);
    rho *= 0.5;
    return rho;
}

BlochState density_to_bloch(const DensityMatrix& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw InvalidDensity("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - 1.0) > kHermitianTol) {
        throw InvalidDensity("density matrix trace is not 1");
    }
    BlochState s;
    s.s1 = (rho * pauli(1)).trace().real();
    s.s2 = (rho * pauli(2)).trace().real();
    s.s3 = (rho * pauli(3)).trace().real();
    return s;
}

SystemParams params_from_nmr(double gamma, double b0, double b1, double t1,
                             double t2, double m0) {
    if (gamma <= 0.0 || b0 <= 0.0) {
        throw ValidationError("gamma and B0 must be positive");
    }
    SystemParams p;
    p.omega0 = gamma * b0;
    p.omega1 = gamma * b1;
    p.omega_drive = p.omega0;
    p.t1 = t1;
    p.t2 = t2;
    p.s_eq = m0;
    return validate_params(p);
}

}  // namespace srbloch
