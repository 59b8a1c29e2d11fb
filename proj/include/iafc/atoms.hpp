// atoms.hpp
// ---------
// Umbrella header for the atomic-structure module.
#pragma once

#include "iafc/atoms/atom.hpp"
#include "iafc/atoms/hyperfine.hpp"
#include "iafc/atoms/transitions.hpp"
