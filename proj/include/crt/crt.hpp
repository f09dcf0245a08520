#pragma once

#include "crt/assembly.hpp"
#include "crt/benchmarks.hpp"
#include "crt/cr_space.hpp"
#include "crt/errors.hpp"
#include "crt/geometry.hpp"
#include "crt/half_mesh.hpp"
#include "crt/io.hpp"
#include "crt/limiting.hpp"
#include "crt/mesh.hpp"
#include "crt/quadrature.hpp"
#include "crt/reconstruction.hpp"
#include "crt/sparse.hpp"
#include "crt/time_integration.hpp"
