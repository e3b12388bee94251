#ifndef HYPRES_HYPRES_HPP
#define HYPRES_HYPRES_HPP

#include "hypres/constants.hpp"
#include "hypres/domain.hpp"
#include "hypres/modes.hpp"
#include "hypres/parallel.hpp"
#include "hypres/phase.hpp"
#include "hypres/quadrature.hpp"
#include "hypres/resonances.hpp"
#include "hypres/scaled.hpp"
#include "hypres/scatdet.hpp"
#include "hypres/specfun.hpp"
#include "hypres/uniform.hpp"

#endif
