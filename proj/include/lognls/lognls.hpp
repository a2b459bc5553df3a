#pragma once

#include "lognls/nonlinearity.hpp"
#include "lognls/grid.hpp"
#include "lognls/fft.hpp"
#include "lognls/spectral.hpp"
#include "lognls/transforms.hpp"
#include "lognls/diagnostics.hpp"
#include "lognls/integrator.hpp"
#include "lognls/datum.hpp"
#include "lognls/experiments.hpp"
#include "lognls/io.hpp"
