#pragma once

#include "dpkit/convection.hpp"
#include "dpkit/eigensolver.hpp"
#include "dpkit/errors.hpp"
#include "dpkit/exponent_field.hpp"
#include "dpkit/expression.hpp"
#include "dpkit/function.hpp"
#include "dpkit/hypotheses.hpp"
#include "dpkit/io.hpp"
#include "dpkit/manufactured.hpp"
#include "dpkit/mesh.hpp"
#include "dpkit/model.hpp"
#include "dpkit/modular.hpp"
#include "dpkit/operator.hpp"
#include "dpkit/parallel.hpp"
#include "dpkit/quadrature.hpp"
#include "dpkit/solver.hpp"
#include "dpkit/types.hpp"
