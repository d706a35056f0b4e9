#ifndef MVFRAC_MVFRAC_HPP
#define MVFRAC_MVFRAC_HPP

#include "mvfrac/errors.hpp"
#include "mvfrac/fracops.hpp"
#include "mvfrac/gamma.hpp"
#include "mvfrac/hyper.hpp"
#include "mvfrac/json_io.hpp"
#include "mvfrac/lanczos.hpp"
#include "mvfrac/rng.hpp"
#include "mvfrac/sample.hpp"
#include "mvfrac/spd.hpp"
#include "mvfrac/verify.hpp"
#include "mvfrac/zonal.hpp"

#endif  // MVFRAC_MVFRAC_HPP
