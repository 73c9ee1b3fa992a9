#pragma once

#include "hsflow/vec3.hpp"
#include "hsflow/grid.hpp"
#include "hsflow/linear_solve.hpp"
#include "hsflow/functionals.hpp"
#include "hsflow/integrator.hpp"
#include "hsflow/initial_data.hpp"
#include "hsflow/criteria.hpp"
#include "hsflow/concavity.hpp"
#include "hsflow/io.hpp"
#include "hsflow/config.hpp"
