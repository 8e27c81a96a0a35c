#pragma once

#include <complex>
#include <memory>

#include <Eigen/Dense>

#include "qjump/sector_basis.hpp"

namespace qjump {

using Complex = std::complex<double>;

/// State vector restricted to one fixed-magnetization sector.
struct DenseState {
    SectorBasisPtr basis;
    Eigen::VectorXcd amplitudes;

    int n_sites() const { return basis->n_sites(); }
    int n_excitations() const { return basis->n_excitations(); }
    std::size_t dimension() const { return basis->dimension(); }
    double norm() const { return amplitudes.norm(); }
    void normalize() { amplitudes /= amplitudes.norm(); }
};

}  // namespace qjump
