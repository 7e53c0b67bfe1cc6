#pragma once

#include <span>

#include <Eigen/Dense>

namespace comp_isac {

/// Per-BS transmit powers (linear). Entries are finite and >= 0.
class PowerVector {
public:
    PowerVector() = default;
    explicit PowerVector(Eigen::VectorXd powers);

    static PowerVector equal(int cells, double total);

    int size() const noexcept { return static_cast<int>(p_.size()); }
    double operator[](int l) const { return p_(l); }
    const Eigen::VectorXd& values() const noexcept { return p_; }
    double total() const { return p_.sum(); }
    bool within_budget(double budget, double tol = 1e-9) const { return total() <= budget + tol; }

private:
    Eigen::VectorXd p_;
};

}  // namespace comp_isac
