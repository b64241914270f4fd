#pragma once

#include "cqdp/certify.hpp"
#include "cqdp/dp.hpp"
#include "cqdp/errors.hpp"
#include "cqdp/fisher.hpp"
#include "cqdp/frontier.hpp"
#include "cqdp/hermitian.hpp"
#include "cqdp/io.hpp"
#include "cqdp/simplex.hpp"
#include "cqdp/witness.hpp"
