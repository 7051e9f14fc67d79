#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace comsim::bundles {

struct Bundle {
    std::string name;
    std::string description;
    /// Config text, see config.hpp.
    std::string config;
};

[[nodiscard]] const std::vector<Bundle>& all();
[[nodiscard]] std::optional<Bundle> find(std::string_view name);

}  // namespace comsim::bundles
