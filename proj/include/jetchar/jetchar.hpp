#pragma once

// Umbrella header: exact arithmetic for truncated-ring matrix groups, twisted
// Frobenii and their fixed groups, characters of the torus fixed points,
// genericity, the function-level sheaf calculus, induced characters via the
// fixed-point coset formula, and Howe factorization with iterated induction.

#include "jetchar/bruhat.hpp"
#include "jetchar/charfn.hpp"
#include "jetchar/error.hpp"
#include "jetchar/field.hpp"
#include "jetchar/frobenius.hpp"
#include "jetchar/genericity.hpp"
#include "jetchar/group.hpp"
#include "jetchar/howe.hpp"
#include "jetchar/induction.hpp"
#include "jetchar/json_io.hpp"
#include "jetchar/linalg.hpp"
#include "jetchar/matrix.hpp"
#include "jetchar/sheaffn.hpp"
#include "jetchar/trunc_ring.hpp"
#include "jetchar/weyl.hpp"
