#pragma once

#include "cfota/fnn.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfota {

/// Keep only samples whose raw label is listed; the i-th listed label becomes i.
struct LabelFilter {
    std::vector<int> keep;
};

/// EMNIST letters, classes A..J (raw labels 1..10) mapped to 0..9.
LabelFilter emnist_a_to_j();

/// Reads an IDX image file (magic 0x00000803) and label file (magic 0x00000801).
/// Pixels are scaled to [0, 1] and flattened row-major. Without a filter every
/// label must lie in [0, classes). Throws IoError, BadMagic, TruncatedFile,
/// LabelOutOfRange (also for image/label count mismatch).
Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path,
                         const std::optional<LabelFilter>& filter = std::nullopt,
                         int classes = 10);

}  // namespace cfota
