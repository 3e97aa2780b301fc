#pragma once

// Kinetostatic and elastodynamic analysis of the Biglide-style PRRRP
// parallel machine: mechanism kinematics, simplified (drive-spring) and
// refined (virtual-joint / lumped-element) stiffness and modal models, leg
// scaling studies, dataset handling and CSV emission.

#include "biglide/beam.hpp"
#include "biglide/csv.hpp"
#include "biglide/dataset.hpp"
#include "biglide/errors.hpp"
#include "biglide/mechanism.hpp"
#include "biglide/modal.hpp"
#include "biglide/numerics.hpp"
#include "biglide/simplified.hpp"
#include "biglide/sweep.hpp"
#include "biglide/transform.hpp"
#include "biglide/vjm.hpp"
