#pragma once

#include "mpnormal/arnoldi.hpp"
#include "mpnormal/block.hpp"
#include "mpnormal/direct_sum.hpp"
#include "mpnormal/error.hpp"
#include "mpnormal/extension.hpp"
#include "mpnormal/growth_model.hpp"
#include "mpnormal/io.hpp"
#include "mpnormal/linalg.hpp"
#include "mpnormal/oracle.hpp"
#include "mpnormal/schatten.hpp"
#include "mpnormal/spectrum.hpp"
#include "mpnormal/tolerances.hpp"
