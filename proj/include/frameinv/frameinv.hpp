#pragma once

#include "frameinv/bench.hpp"
#include "frameinv/coefficients.hpp"
#include "frameinv/errors.hpp"
#include "frameinv/frame.hpp"
#include "frameinv/gram.hpp"
#include "frameinv/index_set.hpp"
#include "frameinv/linalg.hpp"
#include "frameinv/localization.hpp"
#include "frameinv/operators.hpp"
#include "frameinv/quadrature.hpp"
#include "frameinv/reconstruct.hpp"
#include "frameinv/solvers.hpp"
#include "frameinv/target_function.hpp"
#include "frameinv/theory.hpp"
