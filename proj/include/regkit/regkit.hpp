#pragma once

// Numerical toolkit for eventual-regularity analysis of operator-valued
// functions: extended seminorms, arbitrary-order difference quotients,
// mollifier smoothness probes, Cauchy-estimate analyticity detection, and
// holomorphic extension domains of semigroups.

#include "regkit/analytic.hpp"
#include "regkit/classify.hpp"
#include "regkit/common.hpp"
#include "regkit/config.hpp"
#include "regkit/finitediff.hpp"
#include "regkit/gallery.hpp"
#include "regkit/holoext.hpp"
#include "regkit/kernel.hpp"
#include "regkit/lowdisc.hpp"
#include "regkit/mollifier.hpp"
#include "regkit/quadrature.hpp"
#include "regkit/seminorm.hpp"
