#pragma once

#include "colldecay/errors.hpp"
#include "colldecay/generator.hpp"
#include "colldecay/kernel.hpp"
#include "colldecay/network.hpp"
#include "colldecay/observables.hpp"
#include "colldecay/oracle.hpp"
#include "colldecay/solve.hpp"
#include "colldecay/spectral.hpp"
#include "colldecay/time_series.hpp"
