// SPDX-License-Identifier: Apache-2.0

#ifndef PPG_PPG_HPP
#define PPG_PPG_HPP

#include "ppg/bench.hpp"
#include "ppg/core.hpp"
#include "ppg/dense.hpp"
#include "ppg/ilu.hpp"
#include "ppg/krylov.hpp"
#include "ppg/poly.hpp"
#include "ppg/solvers.hpp"
#include "ppg/sparse.hpp"

#endif  // PPG_PPG_HPP
