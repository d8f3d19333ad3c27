#pragma once

#include "fspace/certify.hpp"
#include "fspace/cholesky.hpp"
#include "fspace/dense.hpp"
#include "fspace/eigen.hpp"
#include "fspace/errors.hpp"
#include "fspace/matrix_market.hpp"
#include "fspace/model_problems.hpp"
#include "fspace/pcg.hpp"
#include "fspace/pseudoinverse.hpp"
#include "fspace/qr.hpp"
#include "fspace/random.hpp"
#include "fspace/report.hpp"
#include "fspace/schwarz.hpp"
#include "fspace/verify.hpp"
