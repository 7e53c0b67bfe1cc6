#include "comp_isac/power.hpp"

#include "comp_isac/errors.hpp"

namespace comp_isac {

PowerVector::PowerVector(Eigen::VectorXd powers) : p_(std::move(powers))
{
    if (!p_.allFinite() || (p_.array() < 0.0).any()) {
        throw DomainError("PowerVector: powers must be finite and >= 0");
    }
}

PowerVector PowerVector::equal(int cells, double total)
{
    return PowerVector(Eigen::VectorXd::Constant(cells, total / cells));
}

}  // namespace comp_isac
