#pragma once

#include <filesystem>
#include <string>

#include "rtc/sampling.hpp"
#include "rtc/tensor.hpp"

namespace rtc {

/// Tensor file layout:
///   line 1: compact JSON header terminated by '\n'
///           {"dims":[n1,n2,n3],"dtype":"f64","order":"slice-major",
///            "units":"...","seed-provenance":"..."}
///   then:   n1*n2*n3 little-endian IEEE-754 doubles, entry (i,j,k) at
///           position i + n1*(j + n2*k)
struct TensorFile {
    Tensor3 tensor;
    std::string units;
    std::string provenance;
};

void write_tensor_file(const std::filesystem::path& path, const TensorFile& file);
TensorFile read_tensor_file(const std::filesystem::path& path);

/// Mask file: JSON {"n1": .., "n2": .., "true_indices": [[i, j], ...]},
/// indices in row-major order.
void write_mask_file(const std::filesystem::path& path, const SampleMask& mask);
SampleMask read_mask_file(const std::filesystem::path& path);

} // namespace rtc
