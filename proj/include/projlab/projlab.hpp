#pragma once

#include "projlab/bounds.hpp"
#include "projlab/checks.hpp"
#include "projlab/dimest.hpp"
#include "projlab/errors.hpp"
#include "projlab/family.hpp"
#include "projlab/fractal.hpp"
#include "projlab/grassmann.hpp"
#include "projlab/io.hpp"
#include "projlab/lab.hpp"
#include "projlab/multivec.hpp"
#include "projlab/oracles.hpp"
#include "projlab/parallel.hpp"
#include "projlab/random.hpp"
#include "projlab/regression.hpp"
#include "projlab/transversality.hpp"
#include "projlab/witness.hpp"
