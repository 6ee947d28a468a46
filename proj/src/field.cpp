#include "anisoflow/field.hpp"

#include <stdexcept>

namespace anisoflow {

RealField::RealField(GridPtr grid) : grid_(std::move(grid)), data_(grid_->physical_size(), 0.0) {}

RealField::RealField(GridPtr grid, std::vector<double> samples)
    : grid_(std::move(grid)), data_(samples.begin(), samples.end()) {
    if (data_.size() != grid_->physical_size()) {
        throw std::invalid_argument("sample count does not match grid resolution");
    }
}

RealField RealField::sample(GridPtr grid, const std::function<double(double, double, double)>& f) {
    RealField out(grid);
    const auto& g = *grid;
    for (int i1 = 0; i1 < g.n(0); ++i1) {
        const double x1 = i1 * g.spacing(0);
        for (int i2 = 0; i2 < g.n(1); ++i2) {
            const double x2 = i2 * g.spacing(1);
            for (int i3 = 0; i3 < g.n(2); ++i3) {
                out.data_[g.physical_index(i1, i2, i3)] = f(x1, x2, i3 * g.spacing(2));
            }
        }
    }
    return out;
}

SpectralField::SpectralField(GridPtr grid) : grid_(std::move(grid)), data_(grid_->spectral_size()) {}

namespace {

int wrap(int k, int n) { return ((k % n) + n) % n; }

}  // namespace

Complex SpectralField::at(int k1, int k2, int k3) const {
    const auto& g = *grid_;
    bool conj = false;
    if (k3 < 0) {
        k1 = -k1;
        k2 = -k2;
        k3 = -k3;
        conj = true;
    }
    if (2 * k3 > g.n(2)) {
        throw std::out_of_range("wavenumber outside the grid lattice");
    }
    const Complex c = data_[g.spectral_index(wrap(k1, g.n(0)), wrap(k2, g.n(1)), k3)];
    return conj ? std::conj(c) : c;
}

void SpectralField::set_mode(int k1, int k2, int k3, Complex value) {
    const auto& g = *grid_;
    if (k3 < 0) {
        k1 = -k1;
        k2 = -k2;
        k3 = -k3;
        value = std::conj(value);
    }
    if (2 * k3 > g.n(2)) {
        throw std::out_of_range("wavenumber outside the grid lattice");
    }
    const std::size_t m = g.spectral_index(wrap(k1, g.n(0)), wrap(k2, g.n(1)), k3);
    if (g.hermitian_weight(m) == 1.0) {
        const std::size_t p = g.conjugate_partner(m);
        if (p == m) {
            data_[m] = Complex(value.real(), 0.0);
            return;
        }
        data_[p] = std::conj(value);
    }
    data_[m] = value;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (!a.is_valid() || !b.is_valid()) {
        throw std::invalid_argument("field has no grid");
    }
    if (a.grid() != b.grid() && !a.grid()->same_shape(*b.grid())) {
        throw std::invalid_argument("fields live on different grids");
    }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_grid(*this, other);
    for (std::size_t m = 0; m < data_.size(); ++m) data_[m] += other.data_[m];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_grid(*this, other);
    for (std::size_t m = 0; m < data_.size(); ++m) data_[m] -= other.data_[m];
    return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
    for (auto& c : data_) c *= scale;
    return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
    require_same_grid(*this, x);
    for (std::size_t m = 0; m < data_.size(); ++m) data_[m] += a * x.data_[m];
    return *this;
}

void SpectralField::set_zero() {
    for (auto& c : data_) c = Complex{};
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

}  // namespace anisoflow
