// thermal.hpp
// -----------
// Umbrella header for the thermal-broadening module.
#pragma once

#include "iafc/thermal/doppler.hpp"
#include "iafc/thermal/storage.hpp"
#include "iafc/thermal/velocity.hpp"
