#pragma once

#include "mps2/classify.hpp"
#include "mps2/common.hpp"
#include "mps2/ed.hpp"
#include "mps2/io.hpp"
#include "mps2/mps.hpp"
#include "mps2/numerics.hpp"
#include "mps2/parent_ham.hpp"
#include "mps2/scan.hpp"
#include "mps2/symmetry.hpp"
