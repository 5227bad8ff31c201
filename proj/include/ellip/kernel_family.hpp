#pragma once

#include <optional>
#include <string_view>

namespace ellip {

enum class KernelFamily { Gaussian, Piq };

std::string_view to_string(KernelFamily family);
std::optional<KernelFamily> parse_kernel_family(std::string_view name);

}  // namespace ellip
