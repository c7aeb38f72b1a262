#ifndef POINTNLS_POINTNLS_HPP
#define POINTNLS_POINTNLS_HPP

#include "pointnls/charge.hpp"
#include "pointnls/config.hpp"
#include "pointnls/defaults.hpp"
#include "pointnls/errors.hpp"
#include "pointnls/experiments.hpp"
#include "pointnls/fft.hpp"
#include "pointnls/free_propagator.hpp"
#include "pointnls/grid.hpp"
#include "pointnls/hartree.hpp"
#include "pointnls/io.hpp"
#include "pointnls/manybody.hpp"
#include "pointnls/potentials.hpp"
#include "pointnls/study_io.hpp"
#include "pointnls/version.hpp"
#include "pointnls/wavefunction.hpp"

#endif
