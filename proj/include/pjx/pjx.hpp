#pragma once

#include "asymptotics.hpp"
#include "classifier.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "exact_solution.hpp"
#include "io.hpp"
#include "mol_oracle.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"
