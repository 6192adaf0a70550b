#ifndef IMOG_VALIDATE_HPP
#define IMOG_VALIDATE_HPP

#include <vector>

#include "imog/diagnostic.hpp"
#include "imog/model.hpp"

namespace imog {

/// Checks every structural invariant of the model. The result is sorted by
/// (code, element id) and is empty iff the model is valid; the only Info
/// finding (SP-SSEOVERLAP) is advisory and does not indicate a violation.
std::vector<Diagnostic> validate_model(const Model& model);

/// Throws InvalidModelError when validate_model reports any Error.
void require_valid(const Model& model);

}  // namespace imog

#endif  // IMOG_VALIDATE_HPP
