#pragma once

// Umbrella header: qubit noise channels, two-qubit concurrence, the channel
// bias functionals (SE, EC, DDC, CDS, IC, EB bounds), and the sweep runner.

#include "qbias/channels.hpp"
#include "qbias/concurrence.hpp"
#include "qbias/eig.hpp"
#include "qbias/matrix.hpp"
#include "qbias/measures.hpp"
#include "qbias/optimize.hpp"
#include "qbias/rng.hpp"
#include "qbias/states.hpp"
#include "qbias/sweep.hpp"
#include "qbias/verify.hpp"
