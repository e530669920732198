#pragma once

#include "lawbench/sweep.hpp"

#include <string>
#include <string_view>

namespace lawbench {

/// Flat key = value text. One assignment per line, '#' starts a comment.
/// Lists are comma separated; an item lo:hi:step expands to an inclusive
/// arithmetic range. `preset = name` loads a named preset, and later lines
/// override its fields. Unknown keys and malformed values are errors.
SweepConfig parse_config(std::string_view text, SweepConfig base = {});
SweepConfig load_config(const std::string& path, SweepConfig base = {});

/// Renders a config in the same grammar; parse_config(render_config(c)) == c.
std::string render_config(const SweepConfig& c);

}  // namespace lawbench
