#ifndef BRANE_BRANE_HPP
#define BRANE_BRANE_HPP

#include "brane/brane_check.hpp"
#include "brane/cohomology.hpp"
#include "brane/error.hpp"
#include "brane/exterior4.hpp"
#include "brane/linalg.hpp"
#include "brane/period_domain.hpp"
#include "brane/scalar.hpp"
#include "brane/torus_forms.hpp"

#endif  // BRANE_BRANE_HPP
