#pragma once

#include "sqzkit/errors.hpp"
#include "sqzkit/gaussian_network.hpp"
#include "sqzkit/gaussian_optics.hpp"
#include "sqzkit/loss_budget.hpp"
#include "sqzkit/opo_model.hpp"
#include "sqzkit/reference_data.hpp"
#include "sqzkit/reproduce.hpp"
#include "sqzkit/units.hpp"
