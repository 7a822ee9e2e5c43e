#include "tas/subset.hpp"

#include "tas/error.hpp"

namespace tas {

AntennaSubset::AntennaSubset(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) throw InputDomainError("antenna subset must not be empty");
    for (std::size_t i = 1; i < indices_.size(); ++i) {
        if (indices_[i] <= indices_[i - 1]) {
            throw InputDomainError("antenna subset indices must be distinct and increasing");
        }
    }
}

std::string AntennaSubset::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(indices_[i] + 1);
    }
    return out + "}";
}

}  // namespace tas
