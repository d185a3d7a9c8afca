#pragma once

#include "flagalg/poset.hpp"

namespace fixtures {

// a < b, a < c
inline flagalg::Poset v_poset() { return flagalg::parse_poset("elements: a b c\ncovers:\na b\na c\n"); }

// b < a, c < a
inline flagalg::Poset lambda_poset() { return flagalg::parse_poset("elements: a b c\ncovers:\nb a\nc a\n"); }

// 0 < a < 1, 0 < b < 1
inline flagalg::Poset diamond() { return flagalg::parse_poset("elements: 0 a b 1\ncovers:\n0 a\n0 b\na 1\nb 1\n"); }

}  // namespace fixtures
