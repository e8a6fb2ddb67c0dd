#include "poolcheck/hardness.hpp"
