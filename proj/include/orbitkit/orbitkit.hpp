#ifndef ORBITKIT_ORBITKIT_HPP
#define ORBITKIT_ORBITKIT_HPP

#include "orbitkit/error.hpp"
#include "orbitkit/dense.hpp"
#include "orbitkit/linalg.hpp"
#include "orbitkit/spectral.hpp"
#include "orbitkit/norms.hpp"
#include "orbitkit/expectation.hpp"
#include "orbitkit/commutator.hpp"
#include "orbitkit/orbit.hpp"
#include "orbitkit/counterexamples.hpp"

#endif
