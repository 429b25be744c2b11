#pragma once

// Certified two-sided Darboux enclosures of Riemann and Riemann-Stieltjes
// integrals, with a mechanically checked change-of-variable ledger.

#include "darboux/certify.hpp"
#include "darboux/enclosure.hpp"
#include "darboux/errors.hpp"
#include "darboux/function.hpp"
#include "darboux/gallery.hpp"
#include "darboux/integrator.hpp"
#include "darboux/interval.hpp"
#include "darboux/partition.hpp"
#include "darboux/stieltjes.hpp"
#include "darboux/substitution.hpp"
#include "darboux/sums.hpp"
