#pragma once

// Umbrella header: cut-set bounds and zero-error function-computing codes
// for directed acyclic networks.

#include "fcomp/bigint.hpp"     // IWYU pragma: export
#include "fcomp/bounds.hpp"     // IWYU pragma: export
#include "fcomp/code.hpp"       // IWYU pragma: export
#include "fcomp/equivalence.hpp"  // IWYU pragma: export
#include "fcomp/function.hpp"   // IWYU pragma: export
#include "fcomp/instances.hpp"  // IWYU pragma: export
#include "fcomp/io.hpp"         // IWYU pragma: export
#include "fcomp/network.hpp"    // IWYU pragma: export
#include "fcomp/tree.hpp"       // IWYU pragma: export
#include "fcomp/util.hpp"       // IWYU pragma: export
