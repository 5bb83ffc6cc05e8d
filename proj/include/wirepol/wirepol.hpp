#pragma once

#include "wirepol/asymptotic.hpp"
#include "wirepol/constants.hpp"
#include "wirepol/errors.hpp"
#include "wirepol/format.hpp"
#include "wirepol/materials.hpp"
#include "wirepol/parallel.hpp"
#include "wirepol/polarimetry.hpp"
#include "wirepol/quadrature.hpp"
#include "wirepol/report.hpp"
#include "wirepol/scattering.hpp"
#include "wirepol/special_functions.hpp"
#include "wirepol/spectral.hpp"
#include "wirepol/sweep.hpp"
#include "wirepol/version.hpp"
