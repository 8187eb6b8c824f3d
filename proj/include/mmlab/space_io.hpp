#pragma once

#include <string>

#include "mmlab/space.hpp"

namespace mmlab {

// Space files come in two lossless, mutually convertible forms.
//
// Text form, three sections:
//   [vertices]   id coord... measure      (coord count fixed per file)
//   [edges]      id id length
//   [metadata]   base_point / dimension_bound / coord_dim
//
// JSON form mirrors the same content under keys "vertices", "edges",
// "metadata". Floats are printed with enough digits to round-trip.

std::string space_to_text(const DiscreteSpace& space);
DiscreteSpace space_from_text(const std::string& text);

std::string space_to_json_string(const DiscreteSpace& space);
DiscreteSpace space_from_json_string(const std::string& json_text);

void save_space_text(const DiscreteSpace& space, const std::string& path);
DiscreteSpace load_space_text(const std::string& path);
void save_space_json(const DiscreteSpace& space, const std::string& path);
DiscreteSpace load_space_json(const std::string& path);

/// Loads either form, picking by file extension (.json vs anything else).
DiscreteSpace load_space(const std::string& path);

}  // namespace mmlab
