#pragma once

#include "cval/matrix.hpp"
#include "cval/partition.hpp"

#include <optional>
#include <string>

namespace cval {

struct Dataset {
    DataMatrix data;
    std::optional<Partition> truth;  // from a trailing integer "class" column
};

// Numeric CSV, one row per object.  When `class_column` is true the final
// column is read as integer ground-truth labels.  `has_header` skips the
// first line.
Dataset read_csv(const std::string& path, bool has_header, bool class_column);

}  // namespace cval
