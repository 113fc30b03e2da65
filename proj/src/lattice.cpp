#include "ncglab/lattice.hpp"

// header-only; translation unit anchors the module in the build
