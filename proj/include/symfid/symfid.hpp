#pragma once

#include "binomial.hpp"
#include "counterexample.hpp"
#include "errors.hpp"
#include "localops.hpp"
#include "lu_opt.hpp"
#include "optim.hpp"
#include "reports.hpp"
#include "states.hpp"
#include "symfid_opt.hpp"
