#ifndef IMOG_DOT_HPP
#define IMOG_DOT_HPP

#include <string>

#include "imog/model.hpp"
#include "imog/model_index.hpp"

namespace imog {

/// Graphviz digraph of one perspective. Node ids are element ids; see
/// docs/format.md for the edge legend. Output depends only on the model.
///
/// Supported perspectives: Functional, Structural, Quality. Throws
/// EmptyPerspectiveError when the perspective has no elements and
/// std::invalid_argument for other perspectives.
std::string export_dot(const Model& model, Perspective perspective);

}  // namespace imog

#endif  // IMOG_DOT_HPP
