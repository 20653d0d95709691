#pragma once

#include "permon/abelian.hpp"
#include "permon/config.hpp"
#include "permon/error.hpp"
#include "permon/geometry.hpp"
#include "permon/green.hpp"
#include "permon/hopf.hpp"
#include "permon/modelsolve.hpp"
#include "permon/numeric.hpp"
#include "permon/report.hpp"
#include "permon/specfn.hpp"
#include "permon/spectral.hpp"
#include "permon/verify.hpp"
