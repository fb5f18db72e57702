#ifndef SWIRL_PARSE_HPP
#define SWIRL_PARSE_HPP

#include <string>

#include "swirl/ir.hpp"

namespace swirl {

/// Parses the .swirl text format. Preserves syntactic structure exactly;
/// no normalization is applied.
WorkflowSystem parse_swirl(const std::string& text);

WorkflowSystem load_swirl_file(const std::string& path);
void write_swirl_file(const WorkflowSystem& sys, const std::string& path);

}  // namespace swirl

#endif
