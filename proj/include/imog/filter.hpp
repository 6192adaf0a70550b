#ifndef IMOG_FILTER_HPP
#define IMOG_FILTER_HPP

#include <string_view>
#include <vector>

#include "imog/model.hpp"

namespace imog {

/// Copy of `model` restricted to elements on the given abstraction levels.
///
/// Leveled elements (FP blocks, requirements, SP blocks) are kept iff their
/// level is listed. Relations, groups and trace links survive only when every
/// endpoint survives. Blocks whose parent relation was dropped become roots of
/// the view. Structural blocks that are dropped hand their decomposition
/// contents up to the enclosing decomposition; their variants go with them.
/// Strategy, knowledge, packages and notes have no level and are kept.
///
/// Throws EmptyFilterError when `levels` is empty.
Model filter_by_abstraction_level(const Model& model, const std::vector<AbstractionLevel>& levels);

/// "context", "System", ... (any case) name the predefined levels; anything
/// else names a custom level verbatim.
AbstractionLevel parse_level_name(std::string_view name);

/// Comma-separated list of level names; empty items are skipped.
std::vector<AbstractionLevel> parse_level_list(std::string_view csv);

}  // namespace imog

#endif  // IMOG_FILTER_HPP
