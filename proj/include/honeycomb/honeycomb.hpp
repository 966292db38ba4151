#pragma once

// Umbrella header: classification, conformal geometry, fundamental simplices,
// edge enumeration, boundary rendering, and mesh export for regular
// honeycombs given by Schlafli symbols {p,q,r}.

#include "honeycomb/conformal.hpp"
#include "honeycomb/elements.hpp"
#include "honeycomb/errors.hpp"
#include "honeycomb/image.hpp"
#include "honeycomb/mesh.hpp"
#include "honeycomb/render.hpp"
#include "honeycomb/schlafli.hpp"
#include "honeycomb/simplex.hpp"
#include "honeycomb/vec.hpp"
