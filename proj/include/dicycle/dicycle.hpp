#pragma once

#include "constructions.hpp"
#include "counting.hpp"
#include "density.hpp"
#include "digraph.hpp"
#include "numtheory.hpp"
#include "oracles.hpp"
#include "pattern.hpp"
#include "reproduce.hpp"
#include "search.hpp"
#include "spectral.hpp"

namespace dicycle {

inline constexpr const char* version = "0.1.0";

} // namespace dicycle
