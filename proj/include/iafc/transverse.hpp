// transverse.hpp
// --------------
// Umbrella header for the transverse (LG-mode) module.
#pragma once

#include "iafc/transverse/field.hpp"
#include "iafc/transverse/free.hpp"
#include "iafc/transverse/inhomogeneous.hpp"
#include "iafc/transverse/vortex.hpp"
