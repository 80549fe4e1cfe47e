#include "ontopure/rational.hpp"

namespace ontopure {

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace ontopure
