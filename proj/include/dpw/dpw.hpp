#ifndef DPW_DPW_HPP
#define DPW_DPW_HPP

#include "error.hpp"
#include "matrix.hpp"
#include "fft.hpp"
#include "loop.hpp"
#include "ode.hpp"
#include "parallel.hpp"
#include "potential.hpp"
#include "flow.hpp"
#include "bessel.hpp"
#include "iwasawa.hpp"
#include "geometry.hpp"
#include "surface.hpp"
#include "mesh_io.hpp"
#include "checks.hpp"
#include "config.hpp"

#endif // DPW_DPW_HPP
