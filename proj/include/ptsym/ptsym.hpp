#pragma once

#include "ptsym/errors.hpp"
#include "ptsym/tolerances.hpp"
#include "ptsym/linalg/matrix.hpp"
#include "ptsym/linalg/sparse.hpp"
#include "ptsym/linalg/hermitian_eig.hpp"
#include "ptsym/linalg/general_eig.hpp"
#include "ptsym/linalg/nullvector.hpp"
#include "ptsym/linalg/partial_transpose.hpp"
#include "ptsym/linalg/sampler.hpp"
#include "ptsym/operators.hpp"
#include "ptsym/models.hpp"
#include "ptsym/liouvillian.hpp"
#include "ptsym/ode.hpp"
#include "ptsym/steadystate.hpp"
#include "ptsym/spectra.hpp"
#include "ptsym/random_ensemble.hpp"
#include "ptsym/hp.hpp"
#include "ptsym/io.hpp"
#include "ptsym/sweep.hpp"
