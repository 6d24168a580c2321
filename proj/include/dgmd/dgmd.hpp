#pragma once

// Everything in one include.

#include "dgmd/error.hpp"
#include "dgmd/format.hpp"
#include "dgmd/quadrature.hpp"
#include "dgmd/condition_report.hpp"
#include "dgmd/distributions.hpp"
#include "dgmd/expression.hpp"
#include "dgmd/distortions.hpp"
#include "dgmd/copulas.hpp"
#include "dgmd/measures.hpp"
#include "dgmd/extrema.hpp"
#include "dgmd/conditions.hpp"
#include "dgmd/rng.hpp"
#include "dgmd/montecarlo.hpp"
#include "dgmd/config.hpp"
#include "dgmd/output.hpp"
