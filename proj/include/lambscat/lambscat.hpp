#ifndef LAMBSCAT_LAMBSCAT_HPP
#define LAMBSCAT_LAMBSCAT_HPP

#include "lambscat/char_poly.hpp"
#include "lambscat/characteristics.hpp"
#include "lambscat/dynamics.hpp"
#include "lambscat/errors.hpp"
#include "lambscat/lp_semigroup.hpp"
#include "lambscat/model.hpp"
#include "lambscat/polynomial.hpp"
#include "lambscat/potential.hpp"
#include "lambscat/profile.hpp"
#include "lambscat/quadrature.hpp"
#include "lambscat/roots.hpp"
#include "lambscat/scattering.hpp"
#include "lambscat/spectral.hpp"

#endif  // LAMBSCAT_LAMBSCAT_HPP
