#pragma once

#include "diagonalize.hpp"
#include "error.hpp"
#include "f2_linalg.hpp"
#include "filtration.hpp"
#include "graded_matrix.hpp"
#include "grades.hpp"
#include "invariants.hpp"
#include "oracle.hpp"
#include "presentation.hpp"
