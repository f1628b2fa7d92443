#pragma once

#include "mife/core.hpp"
#include "mife/simplex.hpp"
#include "mife/quadrature.hpp"
#include "mife/mesh.hpp"
#include "mife/levelset.hpp"
#include "mife/cut.hpp"
#include "mife/surface.hpp"
#include "mife/ife_basis.hpp"
#include "mife/local_space.hpp"
#include "mife/problems.hpp"
#include "mife/discretization.hpp"
#include "mife/dofmap.hpp"
#include "mife/assembly.hpp"
#include "mife/linsolve.hpp"
#include "mife/interpolation.hpp"
#include "mife/errors.hpp"
#include "mife/study.hpp"
#include "mife/verify.hpp"
#include "mife/config.hpp"
#include "mife/vtk.hpp"
