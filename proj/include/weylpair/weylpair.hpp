#pragma once

#include "weylpair/types.hpp"
#include "weylpair/linalg.hpp"
#include "weylpair/parallel.hpp"
#include "weylpair/lattice.hpp"
#include "weylpair/weyl_pair.hpp"
#include "weylpair/commutant.hpp"
#include "weylpair/dilation.hpp"
#include "weylpair/counterexample.hpp"
#include "weylpair/io.hpp"
#include "weylpair/scenario.hpp"
