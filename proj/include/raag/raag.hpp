#pragma once

// Umbrella header.

#include "raag/certificates.hpp"
#include "raag/complex.hpp"
#include "raag/cosets.hpp"
#include "raag/deciders.hpp"
#include "raag/element.hpp"
#include "raag/errors.hpp"
#include "raag/geometry.hpp"
#include "raag/graph.hpp"
#include "raag/io.hpp"
#include "raag/word.hpp"
