#ifndef MBMOM_MBMOM_HPP
#define MBMOM_MBMOM_HPP

#include "mbmom/basis.hpp"
#include "mbmom/costmodel.hpp"
#include "mbmom/equations.hpp"
#include "mbmom/error.hpp"
#include "mbmom/io.hpp"
#include "mbmom/lattice.hpp"
#include "mbmom/linalg.hpp"
#include "mbmom/metrics.hpp"
#include "mbmom/model.hpp"
#include "mbmom/mom.hpp"
#include "mbmom/multibranch.hpp"
#include "mbmom/oracles.hpp"
#include "mbmom/recursion.hpp"
#include "mbmom/scalar.hpp"
#include "mbmom/solver.hpp"

#endif  // MBMOM_MBMOM_HPP
