#pragma once

#include "spillover/analysis.hpp"
#include "spillover/closed_forms.hpp"
#include "spillover/config.hpp"
#include "spillover/equilibrium.hpp"
#include "spillover/error.hpp"
#include "spillover/funcexpr.hpp"
#include "spillover/grid.hpp"
#include "spillover/model.hpp"
#include "spillover/report.hpp"
#include "spillover/scalar_func.hpp"
#include "spillover/vie.hpp"
