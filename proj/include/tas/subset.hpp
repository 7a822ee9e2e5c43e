#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tas {

/// Strictly increasing, 0-based source antenna indices. Rendered 1-based for people.
class AntennaSubset {
public:
    AntennaSubset() = default;

    /// Throws InputDomainError unless `indices` is nonempty and strictly increasing.
    explicit AntennaSubset(std::vector<std::size_t> indices);
    AntennaSubset(std::initializer_list<std::size_t> indices)
        : AntennaSubset(std::vector<std::size_t>(indices)) {}

    std::span<const std::size_t> indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    std::size_t operator[](std::size_t i) const { return indices_[i]; }

    /// e.g. "{1,3}"
    std::string to_string() const;

    bool operator==(const AntennaSubset&) const = default;
    auto operator<=>(const AntennaSubset&) const = default;

private:
    std::vector<std::size_t> indices_;
};

}  // namespace tas
