#pragma once

#include <stdexcept>
#include <string>

namespace uweno {

// Malformed mesh file or bad reference in it; carries a 1-based line number.
struct parse_error : std::runtime_error {
  parse_error(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_number(line) {}
  int line_number;
};

// Non-conforming connectivity: a face shared by more than two cells,
// inconsistent cell orientation, or a missing required neighbor.
struct topology_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Degenerate geometry: zero/negative area, zero-length face.
struct geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unregularized normal matrix with a vanishing pivot.
struct singular_matrix_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Conserved state with non-positive density or pressure.
struct unphysical_state_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Gauss point whose linear-weight system collapsed (sum of weights ~ 0).
struct degenerate_weights_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace uweno
