#pragma once

#include "conecrit/angular.hpp"
#include "conecrit/domain.hpp"
#include "conecrit/errors.hpp"
#include "conecrit/exponents.hpp"
#include "conecrit/io.hpp"
#include "conecrit/shooting.hpp"
#include "conecrit/spectral.hpp"
